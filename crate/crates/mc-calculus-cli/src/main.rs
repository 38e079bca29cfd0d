//! Command line surface for the exact nilpotent dg Lie algebra calculus.
//!
//! Every command prints a versioned, byte-deterministic report and exits
//! with 0 on success, 1 on a failed property check, and 2 on an input
//! error. The seed for seeded commands resolves as: `--seed` flag, then the
//! `MC_CALCULUS_SEED` environment variable, then 0.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use mc_calculus_cli::commands::{self, FormsAction};

#[derive(Parser)]
#[command(name = "mc-calculus", version, about = "Exact Maurer-Cartan calculus for nilpotent dg Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an algebra file and report every structural check
    Validate { file: PathBuf },
    /// Check the Maurer-Cartan equation for an L-valued form
    McCheck {
        file: PathBuf,
        #[arg(long)]
        level: usize,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    /// Apply the gauge action of a degree-0 element to a Maurer-Cartan element
    GaugeAct {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
    },
    /// Homotopy groups of the Maurer-Cartan space at a base point
    Homotopy {
        file: PathBuf,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        tau: String,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
    },
    /// Samelson product of two positive-degree cycles
    Samelson {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// The connecting-map identity for a twisted cycle
    Connecting {
        file: PathBuf,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        tau: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Operations on polynomial differential forms
    Forms {
        #[command(subcommand)]
        op: FormsCommand,
    },
    /// Discreteness criterion and nerve comparison samples
    Deligne {
        file: PathBuf,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        tau: String,
        #[arg(long, default_value_t = 2)]
        level: usize,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Fill a horn in the Maurer-Cartan space or a simplicial group
    FillHorn {
        file: PathBuf,
        #[arg(long, value_parser = ["mc", "exp", "gauge"])]
        space: String,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        missing: usize,
        /// a face as `index=expression`; repeat for each face
        #[arg(long = "face")]
        faces: Vec<String>,
        /// generate a compatible demo horn instead of passing faces
        #[arg(long)]
        demo_seed: Option<u64>,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        tau: String,
    },
    /// Best-effort search for a gauge equivalence between two elements
    GaugeSearch {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[arg(long, allow_hyphen_values = true)]
        rho: String,
    },
    /// Run the property-check ledger
    Selftest {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "quick", value_parser = ["quick", "full"])]
        scale: String,
    },
}

#[derive(Subcommand)]
enum FormsCommand {
    /// Evaluate one face of a form
    Face {
        #[arg(long)]
        level: usize,
        #[arg(long)]
        index: usize,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
    },
    /// Apply one degeneracy to a form
    Degeneracy {
        #[arg(long)]
        level: usize,
        #[arg(long)]
        index: usize,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
    },
    /// Exact integral over the simplex
    Integrate {
        #[arg(long)]
        level: usize,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
    },
    /// Extend a form with vanishing faces one level up
    Extend {
        #[arg(long)]
        level: usize,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
    },
    /// Contraction homotopy toward the last vertex
    Contract {
        #[arg(long)]
        level: usize,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
    },
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("MC_CALCULUS_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(0)
}

fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let echo = argv.join(" ");
    let cli = Cli::parse();
    let report = match cli.command {
        Command::Validate { file } => commands::cmd_validate(&echo, &file),
        Command::McCheck {
            file,
            level,
            element,
        } => commands::cmd_mc_check(&echo, &file, level, &element),
        Command::GaugeAct { file, x, tau } => commands::cmd_gauge_act(&echo, &file, &x, &tau),
        Command::Homotopy { file, tau, kmax } => {
            commands::cmd_homotopy(&echo, &file, &tau, kmax)
        }
        Command::Samelson { file, x, y } => commands::cmd_samelson(&echo, &file, &x, &y),
        Command::Connecting { file, tau, x } => {
            commands::cmd_connecting(&echo, &file, &tau, &x)
        }
        Command::Forms { op } => match op {
            FormsCommand::Face { level, index, form } => {
                commands::cmd_forms(&echo, FormsAction::Face(index), level, &form)
            }
            FormsCommand::Degeneracy { level, index, form } => {
                commands::cmd_forms(&echo, FormsAction::Degeneracy(index), level, &form)
            }
            FormsCommand::Integrate { level, form } => {
                commands::cmd_forms(&echo, FormsAction::Integrate, level, &form)
            }
            FormsCommand::Extend { level, form } => {
                commands::cmd_forms(&echo, FormsAction::Extend, level, &form)
            }
            FormsCommand::Contract { level, form } => {
                commands::cmd_forms(&echo, FormsAction::Contract, level, &form)
            }
        },
        Command::Deligne {
            file,
            tau,
            level,
            samples,
            seed,
        } => commands::cmd_deligne(&echo, &file, &tau, level, samples, resolve_seed(seed)),
        Command::FillHorn {
            file,
            space,
            level,
            missing,
            faces,
            demo_seed,
            tau,
        } => commands::cmd_fill_horn(
            &echo,
            &file,
            &space,
            level,
            missing,
            &faces,
            demo_seed,
            &tau,
        ),
        Command::GaugeSearch { file, tau, rho } => {
            commands::cmd_gauge_search(&echo, &file, &tau, &rho)
        }
        Command::Selftest { seed, scale } => {
            commands::cmd_selftest(&echo, resolve_seed(seed), &scale)
        }
    };
    print!("{}", report.render());
    std::process::exit(report.status.exit_code());
}
