//! One function per subcommand, each producing a deterministic report.

use std::collections::BTreeMap;
use std::path::Path;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mc_calculus::dgla::Dgla;
use mc_calculus::dold_kan::cocycle_basis;
use mc_calculus::homotopy::{connecting_identity, homotopy_groups, samelson};
use mc_calculus::lie;
use mc_calculus::linear::{solve_linear, vis_zero, vsub, vzero, QMatrix, QVec};
use mc_calculus::scalar::render_scalar;
use mc_calculus::selftest::{ledger_lines, run as run_ledger, Scale};
use mc_calculus::scalar::qi;
use mc_calculus::simplicial::{
    constant_include, deligne_compare, discreteness_check, gauge_act_level, is_mc_simplex,
    mc_check, mc_horn_filler, moore_filler, GroupKind, HornProblem, LieForm,
};
use mc_calculus::corpus;

use crate::parse::{build_algebra, combo_to_vector, parse_algebra_file, parse_form, parse_lieform};
use crate::report::Report;

/// Load, parse and build an algebra file, recording digest and failures.
fn load_algebra(report: &mut Report, path: &Path) -> Option<Dgla> {
    let display = path.display().to_string();
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) => {
            report.fail_input(&format!("cannot read {display}: {e}"));
            return None;
        }
    };
    report.input_digest(&display, &bytes);
    let text = match String::from_utf8(bytes) {
        Ok(t) => t,
        Err(_) => {
            report.fail_input("file is not valid UTF-8");
            return None;
        }
    };
    let file = match parse_algebra_file(&text) {
        Ok(f) => f,
        Err(e) => {
            report.fail_input(&format!("parse error: {e}"));
            return None;
        }
    };
    if !file.name.is_empty() {
        report.kv("algebra", file.name.clone());
    }
    match build_algebra(&file) {
        Ok(l) => Some(l),
        Err(e) => {
            report.fail_input(&format!("cannot build algebra: {e}"));
            None
        }
    }
}

/// Load and additionally require a valid algebra.
fn load_valid_algebra(report: &mut Report, path: &Path) -> Option<Dgla> {
    let l = load_algebra(report, path)?;
    let validation = l.validate();
    if !validation.is_valid() {
        report.section("validation", validation.lines());
        report.fail_input("algebra fails validation");
        return None;
    }
    Some(l)
}

fn parse_vector(report: &mut Report, l: &Dgla, what: &str, s: &str) -> Option<QVec> {
    match combo_to_vector(l, s) {
        Ok(v) => Some(v),
        Err(e) => {
            report.fail_input(&format!("bad {what}: {e}"));
            None
        }
    }
}

pub fn cmd_validate(command: &str, path: &Path) -> Report {
    let mut report = Report::new(command);
    let Some(l) = load_algebra(&mut report, path) else {
        return report;
    };
    let validation = l.validate();
    report.section("validation", validation.lines());
    if !validation.is_valid() {
        report.fail_input("algebra fails validation");
    } else {
        report.kv("dimension", l.dim().to_string());
        report.check(true, "all structural checks");
    }
    report
}

pub fn cmd_mc_check(command: &str, path: &Path, level: usize, element: &str) -> Report {
    let mut report = Report::new(command);
    let Some(l) = load_valid_algebra(&mut report, path) else {
        return report;
    };
    let xi = match parse_lieform(&l, level, element) {
        Ok(xi) => xi,
        Err(e) => {
            report.fail_input(&format!("bad element: {e}"));
            return report;
        }
    };
    match mc_check(&l, &xi) {
        Ok(verdict) => {
            report.section(
                "results",
                vec![
                    format!("element: {}", xi.render(&l)),
                    format!("level: {level}"),
                    format!("curvature: {}", verdict.curvature.render(&l)),
                ],
            );
            report.check(verdict.is_mc, "maurer-cartan equation");
        }
        Err(e) => report.fail_input(&format!("{e}")),
    }
    report
}

pub fn cmd_gauge_act(command: &str, path: &Path, x: &str, tau: &str) -> Report {
    let mut report = Report::new(command);
    let Some(l) = load_valid_algebra(&mut report, path) else {
        return report;
    };
    let (Some(x), Some(tau)) = (
        parse_vector(&mut report, &l, "gauge element", x),
        parse_vector(&mut report, &l, "base point", tau),
    ) else {
        return report;
    };
    match l.gauge_act(&x, &tau) {
        Ok(result) => {
            report.section(
                "results",
                vec![
                    format!("x: {}", l.render(&x)),
                    format!("tau: {}", l.render(&tau)),
                    format!("x . tau: {}", l.render(&result)),
                ],
            );
            let curvature_zero = l
                .curvature(&result)
                .map(|c| vis_zero(&c))
                .unwrap_or(false);
            report.check(curvature_zero, "result satisfies the Maurer-Cartan equation");
            let fixes = result == tau;
            report.section(
                "stabilizer",
                vec![format!("x fixes tau: {}", if fixes { "yes" } else { "no" })],
            );
        }
        Err(e) => report.fail_input(&format!("{e}")),
    }
    report
}

pub fn cmd_homotopy(command: &str, path: &Path, tau: &str, kmax: usize) -> Report {
    let mut report = Report::new(command);
    let Some(l) = load_valid_algebra(&mut report, path) else {
        return report;
    };
    let Some(tau) = parse_vector(&mut report, &l, "base point", tau) else {
        return report;
    };
    let groups = match homotopy_groups(&l, &tau, kmax) {
        Ok(g) => g,
        Err(e) => {
            report.fail_input(&format!("{e}"));
            return report;
        }
    };
    let mut lines = vec![format!(
        "pi_1: dimension {} (exponential of degree-0 twisted cohomology)",
        groups.pi1.dim
    )];
    for entry in &groups.higher {
        lines.push(format!(
            "pi_{}: dimension {}",
            entry.chain_degree + 1,
            entry.dim
        ));
    }
    report.section("homotopy groups", lines);

    if groups.pi1.dim > 0 {
        let mut lines = Vec::new();
        for (i, rep) in groups.pi1.cycle_reps.iter().enumerate() {
            lines.push(format!("class {i}: {}", l.render(rep)));
        }
        for (i, j, coords) in &groups.pi1.bch_table {
            let rendered: Vec<String> = coords.iter().map(render_scalar).collect();
            lines.push(format!("bch(class {i}, class {j}) = [{}]", rendered.join(", ")));
        }
        report.section("fundamental group", lines);
        report.check(groups.pi1.well_defined, "pi_1 product is class-independent");
    }

    let mut reps_ok = true;
    let mut lines = Vec::new();
    for entry in &groups.higher {
        for (i, simplex) in entry.simplex_reps.iter().enumerate() {
            lines.push(format!(
                "pi_{} class {i}: {}",
                entry.chain_degree + 1,
                simplex.render(&l)
            ));
        }
        reps_ok &= entry.reps_are_mc;
    }
    if !lines.is_empty() {
        report.section("representatives", lines);
    }
    for table in &groups.bracket_tables {
        let mut lines = Vec::new();
        for (i, j, coords) in &table.entries {
            let rendered: Vec<String> = coords.iter().map(render_scalar).collect();
            lines.push(format!("[{}:{i}, {}:{j}] = [{}]", table.left_degree, table.right_degree, rendered.join(", ")));
        }
        report.section(
            &format!("bracket H_{} x H_{}", table.left_degree, table.right_degree),
            lines,
        );
    }
    report.check(reps_ok, "all representatives satisfy the Maurer-Cartan equation");
    report
}

pub fn cmd_samelson(command: &str, path: &Path, x: &str, y: &str) -> Report {
    let mut report = Report::new(command);
    let Some(l) = load_valid_algebra(&mut report, path) else {
        return report;
    };
    let (Some(x), Some(y)) = (
        parse_vector(&mut report, &l, "first cycle", x),
        parse_vector(&mut report, &l, "second cycle", y),
    ) else {
        return report;
    };
    match samelson(&l, &x, &y) {
        Ok(s) => {
            report.section(
                "results",
                vec![
                    format!("degrees: ({}, {})", s.left_degree, s.right_degree),
                    format!("curtis product: {}", s.curtis.render(&l)),
                    format!("shuffle bracket: {}", s.shuffle.render(&l)),
                    format!("signed volume class: {}", s.volume_class.render(&l)),
                ],
            );
            if let Some(w) = &s.boundary_witness {
                report.section("boundary witness", vec![w.render(&l)]);
            }
            report.check(s.higher_terms_vanish, "higher BCH terms vanish");
            report.check(s.curtis_equals_shuffle, "curtis product equals shuffle bracket");
            report.check(s.order_independent, "product order immaterial");
            report.check(s.homologous, "homologous to the signed volume class");
        }
        Err(e) => report.fail_input(&format!("{e}")),
    }
    report
}

pub fn cmd_connecting(command: &str, path: &Path, tau: &str, x: &str) -> Report {
    let mut report = Report::new(command);
    let Some(l) = load_valid_algebra(&mut report, path) else {
        return report;
    };
    let (Some(tau), Some(x)) = (
        parse_vector(&mut report, &l, "base point", tau),
        parse_vector(&mut report, &l, "cycle", x),
    ) else {
        return report;
    };
    match connecting_identity(&l, &tau, &x) {
        Ok(c) => {
            report.section(
                "results",
                vec![
                    format!("gauge transform: {}", c.gauge_transform.render(&l)),
                    format!("expected simplex: {}", c.expected.render(&l)),
                ],
            );
            report.check(c.holds, "connecting identity");
        }
        Err(e) => report.fail_input(&format!("{e}")),
    }
    report
}

pub enum FormsAction {
    Face(usize),
    Degeneracy(usize),
    Integrate,
    Extend,
    Contract,
}

pub fn cmd_forms(command: &str, action: FormsAction, level: usize, form: &str) -> Report {
    let mut report = Report::new(command);
    let w = match parse_form(level, form) {
        Ok(w) => w,
        Err(e) => {
            report.fail_input(&format!("bad form: {e}"));
            return report;
        }
    };
    report.kv("form", w.to_string());
    report.kv("level", level.to_string());
    match action {
        FormsAction::Face(i) => match w.face(i) {
            Ok(f) => report.section("results", vec![format!("face {i}: {f}")]),
            Err(e) => report.fail_input(&format!("{e}")),
        },
        FormsAction::Degeneracy(i) => match w.degeneracy(i) {
            Ok(f) => report.section("results", vec![format!("degeneracy {i}: {f}")]),
            Err(e) => report.fail_input(&format!("{e}")),
        },
        FormsAction::Integrate => {
            let value = w.integrate();
            let mut lines = vec![format!("integral: {}", render_scalar(&value))];
            if !w.is_homogeneous_of_degree(level) {
                lines.push(
                    "note: only the top-degree component contributes; lower degrees integrate to zero"
                        .to_string(),
                );
            }
            report.section("results", lines);
        }
        FormsAction::Extend => match w.cone_extension() {
            Ok(nu) => {
                report.section("results", vec![format!("extension: {nu}")]);
                let zero_face = nu.face(0).map(|f| f == w).unwrap_or(false);
                report.check(zero_face, "zeroth face recovers the input");
                let mut others = true;
                for i in 1..=(level + 1) {
                    others &= nu.face(i).map(|f| f.is_zero()).unwrap_or(false);
                }
                report.check(others, "all other faces vanish");
            }
            Err(e) => report.fail_input(&format!("{e}")),
        },
        FormsAction::Contract => {
            let h = w.contraction_homotopy();
            report.section("results", vec![format!("contraction: {h}")]);
            let lhs = h
                .differential()
                .add(&w.differential().contraction_homotopy());
            let rhs = w.sub(&mc_calculus::forms::PolyForm::constant(
                level,
                w.eval_last_vertex(),
            ));
            report.check(lhs == rhs, "homotopy identity d h + h d = 1 - vertex evaluation");
        }
    }
    report
}

pub fn cmd_deligne(
    command: &str,
    path: &Path,
    tau: &str,
    level: usize,
    samples: usize,
    seed: u64,
) -> Report {
    let mut report = Report::new(command);
    report.kv("seed", seed.to_string());
    let Some(l) = load_valid_algebra(&mut report, path) else {
        return report;
    };
    let Some(tau) = parse_vector(&mut report, &l, "base point", tau) else {
        return report;
    };
    let disc = discreteness_check(&l);
    let mut lines = vec![format!(
        "degree-0 cocycle space discrete: {}",
        if disc.discrete { "yes" } else { "no" }
    )];
    if let Some(w) = &disc.witness {
        lines.push(format!(
            "witness (nondegenerate boundary from {} at level {}): {}",
            w.symbol,
            w.level,
            w.boundary.render(&l)
        ));
        lines.push(
            "the nerve comparison fails: the witness is a nonconstant stabilizer of zero"
                .to_string(),
        );
    }
    report.section("discreteness", lines);

    if disc.discrete {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gs: Vec<LieForm> = (0..samples)
            .map(|_| corpus::random_group_simplex(&l, level, &mut rng))
            .collect();
        match deligne_compare(&l, &tau, &gs) {
            Ok(rs) => {
                for (k, s) in rs.iter().enumerate() {
                    report.check(s.roundtrip_exact, &format!("sample {k}: exact roundtrip"));
                    report.check(
                        s.vertex_balanced && s.gauge_balanced,
                        &format!("sample {k}: presentations balanced by a constant stabilizer"),
                    );
                }
            }
            Err(e) => report.fail_input(&format!("{e}")),
        }
    } else {
        report.check(
            disc.witness.is_some(),
            "explicit witness produced for the negative case",
        );
    }
    report
}

pub fn cmd_fill_horn(
    command: &str,
    path: &Path,
    space: &str,
    level: usize,
    missing: usize,
    faces: &[String],
    demo_seed: Option<u64>,
    tau: &str,
) -> Report {
    let mut report = Report::new(command);
    let Some(l) = load_valid_algebra(&mut report, path) else {
        return report;
    };

    let horn = if let Some(seed) = demo_seed {
        report.kv("seed", seed.to_string());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let simplex = match space {
            "mc" => {
                let Some(tau) = parse_vector(&mut report, &l, "base point", tau) else {
                    return report;
                };
                if !l.is_mc(&tau) {
                    report.fail_input("base point is not Maurer-Cartan");
                    return report;
                }
                let g = corpus::random_group_simplex(&l, level, &mut rng);
                match gauge_act_level(&l, &g, &constant_include(&l, &tau, level)) {
                    Ok(xi) => xi,
                    Err(e) => {
                        report.fail_input(&format!("{e}"));
                        return report;
                    }
                }
            }
            "exp" => {
                let basis = cocycle_basis(&l, level, 2);
                let mut z = LieForm::zero(level);
                for (i, b) in basis.iter().enumerate() {
                    if i % 2 == 0 {
                        z = z.add(&b.scale(&corpus::small_scalar(&mut rng)));
                    }
                }
                z
            }
            _ => corpus::random_group_simplex(&l, level, &mut rng),
        };
        match HornProblem::from_simplex(&simplex, missing) {
            Ok(h) => h,
            Err(e) => {
                report.fail_input(&format!("{e}"));
                return report;
            }
        }
    } else {
        let mut map = BTreeMap::new();
        for entry in faces {
            let Some((idx, expr)) = entry.split_once('=') else {
                report.fail_input("faces must be given as --face <index>=<expression>");
                return report;
            };
            let Ok(i) = idx.trim().parse::<usize>() else {
                report.fail_input("face index must be an integer");
                return report;
            };
            match parse_lieform(&l, level - 1, expr.trim()) {
                Ok(f) => {
                    map.insert(i, f);
                }
                Err(e) => {
                    report.fail_input(&format!("bad face {i}: {e}"));
                    return report;
                }
            }
        }
        match HornProblem::new(level, missing, map) {
            Ok(h) => h,
            Err(e) => {
                report.fail_input(&format!("{e}"));
                return report;
            }
        }
    };

    let mut lines = Vec::new();
    for (i, f) in &horn.faces {
        lines.push(format!("face {i}: {}", f.render(&l)));
    }
    report.section("horn", lines);

    let witness = match space {
        "mc" => mc_horn_filler(&l, &horn),
        "exp" => moore_filler(&l, GroupKind::Exponential, &horn),
        "gauge" => moore_filler(&l, GroupKind::Gauge, &horn),
        other => {
            report.fail_input(&format!("unknown space: {other} (use mc, exp or gauge)"));
            return report;
        }
    };
    match witness {
        Ok(w) => {
            report.section("filler", vec![w.filler.render(&l)]);
            for c in &w.checks {
                report.check(c.ok, &format!("face {} matches the horn", c.index));
            }
            if space == "mc" {
                report.check(
                    is_mc_simplex(&l, &w.filler),
                    "filler satisfies the Maurer-Cartan equation",
                );
            }
        }
        Err(e) => report.fail_input(&format!("{e}")),
    }
    report
}

pub fn cmd_gauge_search(command: &str, path: &Path, tau: &str, rho: &str) -> Report {
    let mut report = Report::new(command);
    let Some(l) = load_valid_algebra(&mut report, path) else {
        return report;
    };
    let (Some(tau), Some(rho)) = (
        parse_vector(&mut report, &l, "tau", tau),
        parse_vector(&mut report, &l, "rho", rho),
    ) else {
        return report;
    };
    if !l.is_mc(&tau) || !l.is_mc(&rho) {
        report.fail_input("both elements must satisfy the Maurer-Cartan equation");
        return report;
    }

    // greedy filtration-wise search; complete only under a cohomology
    // vanishing hypothesis, so obstructions are reported as unknown
    let mut x = vzero(l.dim());
    let mut obstruction: Option<usize> = None;
    for n in 1..=l.nilpotency_class() {
        let defect = vsub(&lie::gauge_act(&l, &x, &rho), &tau);
        if vis_zero(&defect) {
            break;
        }
        let layer = l.filtration_layer(n);
        let deg0: Vec<QVec> = layer
            .basis()
            .iter()
            .filter(|v| l.basis().is_homogeneous(v, 0))
            .cloned()
            .collect();
        let next_layer = l.filtration_layer(n + 1);
        let mut cols: Vec<QVec> = deg0.iter().map(|v| l.d_vec(v)).collect();
        let split = cols.len();
        cols.extend(next_layer.basis().iter().cloned());
        if cols.is_empty() {
            obstruction = Some(n);
            break;
        }
        let m = QMatrix::from_columns(l.dim(), &cols);
        match solve_linear(&m, &defect) {
            Ok(Some(sol)) => {
                for (k, v) in deg0.iter().enumerate().take(split) {
                    if sol[k] != qi(0) {
                        for (pos, entry) in v.iter().enumerate() {
                            x[pos] = &x[pos] + &sol[k] * entry;
                        }
                    }
                }
            }
            _ => {
                obstruction = Some(n);
                break;
            }
        }
    }

    match obstruction {
        Some(n) => {
            report.section(
                "results",
                vec![format!(
                    "unknown: obstruction at filtration degree {n}; the greedy search is \
                     complete only when the graded pieces have vanishing first cohomology"
                )],
            );
        }
        None => {
            let exact = lie::gauge_act(&l, &x, &rho) == tau;
            if exact {
                report.section(
                    "results",
                    vec![format!("gauge witness: {}", l.render(&x))],
                );
                report.check(true, "witness verified: x . rho = tau exactly");
            } else {
                report.section(
                    "results",
                    vec!["unknown: search terminated without an exact witness".to_string()],
                );
            }
        }
    }
    report
}

pub fn cmd_selftest(command: &str, seed: u64, scale_name: &str) -> Report {
    let mut report = Report::new(command);
    report.kv("seed", seed.to_string());
    report.kv("scale", scale_name.to_string());
    let scale = match scale_name {
        "full" => Scale::full(),
        _ => Scale::quick(),
    };
    let results = run_ledger(seed, &scale);
    for line in ledger_lines(&results) {
        report.check_line(line);
    }
    report
}

