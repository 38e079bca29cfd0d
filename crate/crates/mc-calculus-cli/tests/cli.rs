//! Command-line acceptance: report determinism, golden fixtures for corpus
//! commands, the exit-code contract, and agreement between the shipped
//! corpus files and the built-in corpus.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    run_with_env(args, &[])
}

fn run_with_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mc-calculus"));
    cmd.args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env_remove("MC_CALCULUS_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 report")
}

#[test]
fn criterion_9_selftest_ledger_is_byte_identical_across_runs() {
    let first = run(&["selftest", "--seed", "0"]);
    let second = run(&["selftest", "--seed", "0"]);
    assert_eq!(first.stdout, second.stdout, "ledger must be byte-identical");
    assert!(first.status.success());
    let text = stdout_of(&first);
    assert!(text.starts_with("mc-calculus/1\n"));
    assert!(text.contains("PASS gauge-action"));
    assert!(text.ends_with("status: ok\n"));
    println!("[PASS] criterion 9a: selftest ledger byte-identical across two runs");
}

#[test]
fn criterion_9_golden_reports_match_fixtures() {
    let cases: [(&str, &[&str]); 3] = [
        ("validate_xab.txt", &["validate", "corpus/xab.dgla"]),
        (
            "homotopy_k2.txt",
            &["homotopy", "corpus/k2.dgla", "--kmax", "3"],
        ),
        (
            "samelson_uvw.txt",
            &["samelson", "corpus/uvw.dgla", "--x", "u", "--y", "v"],
        ),
    ];
    for (fixture, args) in cases {
        let expected = std::fs::read_to_string(
            Path::new(env!("CARGO_MANIFEST_DIR"))
                .join("tests/golden")
                .join(fixture),
        )
        .expect("fixture exists");
        let out = run(args);
        assert!(out.status.success(), "{args:?}");
        assert_eq!(stdout_of(&out), expected, "golden mismatch for {fixture}");
    }
    println!("[PASS] criterion 9b: golden reports for 3 corpus commands match fixtures");
}

#[test]
fn exit_codes_follow_the_contract() {
    // 0: success
    let ok = run(&["validate", "corpus/k1.dgla"]);
    assert_eq!(ok.status.code(), Some(0));

    // 1: property failure (a degree-1 element that is not Maurer-Cartan)
    let not_mc = run(&[
        "mc-check",
        "corpus/mup.dgla",
        "--level",
        "2",
        "--element",
        "t1 dt2 m",
    ]);
    assert_eq!(not_mc.status.code(), Some(1));
    assert!(stdout_of(&not_mc).contains("FAIL maurer-cartan equation"));

    // 2: input errors (missing file, parse error, validation failure)
    let missing = run(&["validate", "corpus/does_not_exist.dgla"]);
    assert_eq!(missing.status.code(), Some(2));

    let bad = run(&["mc-check", "corpus/mup.dgla", "--level", "1", "--element", "zzz"]);
    assert_eq!(bad.status.code(), Some(2));

    // an incompatible horn is an input error with a located reason
    let horn = run(&[
        "fill-horn",
        "corpus/heisenberg.dgla",
        "--space",
        "gauge",
        "--level",
        "2",
        "--missing",
        "1",
        "--face",
        "0=t1 x",
        "--face",
        "2=t1 y",
    ]);
    assert_eq!(horn.status.code(), Some(2));
    assert!(stdout_of(&horn).contains("incompatible horn"));
}

#[test]
fn validation_failure_reports_witness_and_input_error() {
    let dir = std::env::temp_dir().join("mc_calculus_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad_jacobi.dgla");
    std::fs::write(
        &path,
        "algebra badjacobi\ngenerator x 0\ngenerator y 0\ngenerator z 0\n\
         generator u 0\ngenerator w 0\n[x, y] = z\n[x, z] = u\n[y, z] = w\n[x, w] = u\n",
    )
    .unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout_of(&out);
    assert!(text.contains("FAIL jacobi witness: (x, y, z)"), "{text}");
    assert!(text.ends_with("status: input-error\n"));
}

#[test]
fn seed_resolution_prefers_flag_then_environment() {
    let via_env = run_with_env(&["selftest"], &[("MC_CALCULUS_SEED", "7")]);
    assert!(stdout_of(&via_env).contains("seed: 7"));
    let via_flag = run_with_env(&["selftest", "--seed", "3"], &[("MC_CALCULUS_SEED", "7")]);
    assert!(stdout_of(&via_flag).contains("seed: 3"));
}

#[test]
fn corpus_files_agree_with_the_builtin_corpus() {
    use mc_calculus::corpus;
    use mc_calculus_cli::parse::{build_algebra, parse_algebra_file};
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    for (name, builtin) in corpus::named() {
        if name == "filiform4" {
            continue; // not shipped as a file
        }
        let path = dir.join(format!("{name}.dgla"));
        let text = std::fs::read_to_string(&path)
            .unwrap_or_else(|_| panic!("missing corpus file {name}"));
        let parsed = build_algebra(&parse_algebra_file(&text).unwrap()).unwrap();
        assert!(parsed.validate().is_valid(), "{name}");
        assert_eq!(parsed.dim(), builtin.dim(), "{name}: dimension");
        assert_eq!(
            parsed.nilpotency_class(),
            builtin.nilpotency_class(),
            "{name}: class"
        );
        for i in 0..parsed.dim() {
            assert_eq!(
                parsed.basis().symbol(i),
                builtin.basis().symbol(i),
                "{name}: symbol order"
            );
            assert_eq!(parsed.degree(i), builtin.degree(i), "{name}: degree");
            assert_eq!(
                parsed.d_vec(&parsed.basis().unit(i)),
                builtin.d_vec(&builtin.basis().unit(i)),
                "{name}: differential"
            );
            for j in 0..parsed.dim() {
                assert_eq!(
                    parsed.bracket_vec(&parsed.basis().unit(i), &parsed.basis().unit(j)),
                    builtin.bracket_vec(&builtin.basis().unit(i), &builtin.basis().unit(j)),
                    "{name}: bracket ({i}, {j})"
                );
            }
        }
    }
}
