//! Acceptance suite: every exact guarantee of the crate, at full scale, one
//! line per criterion. Run with `cargo test --test acceptance -- --nocapture`
//! to see the ledger lines. Criterion 9 (command-line determinism and golden
//! reports) lives in the CLI crate's test target.
//!
//! Every tolerance here is zero: all comparisons are exact rational
//! equalities.

use mc_calculus::selftest::{
    suite_deligne, suite_dold_kan, suite_forms, suite_gauge_action, suite_homotopy,
    suite_kan_fillers, suite_stabilizer, suite_vertex_solver, SuiteResult,
};

const SEED: u64 = 0;

fn report(criterion: usize, description: &str, result: &SuiteResult) {
    let verdict = if result.ok() { "PASS" } else { "FAIL" };
    println!(
        "[{verdict}] criterion {criterion}: {description} ({}/{} cases, exact)",
        result.passed, result.total
    );
    assert!(result.ok(), "{}", result.line());
}

#[test]
fn criterion_1_gauge_action_preserves_mc_and_composes() {
    let result = suite_gauge_action(SEED, 200);
    report(
        1,
        "gauge action output satisfies the Maurer-Cartan equation and the BCH action law",
        &result,
    );
    assert!(result.total >= 200);
}

#[test]
fn criterion_2_stabilizer_equivalence() {
    let result = suite_stabilizer(SEED, 200);
    report(
        2,
        "fixing the point is equivalent to the vanishing twisted differential, both directions",
        &result,
    );
    assert!(result.total >= 200);
}

#[test]
fn criterion_3_constructive_vertex_solver() {
    let result = suite_vertex_solver(SEED, 100);
    report(
        3,
        "in-orbit simplices are reproduced from their vertex; the volume-primitive witness is exact",
        &result,
    );
    assert!(result.total >= 100);
}

#[test]
fn criterion_4_forms_identities() {
    let result = suite_forms(SEED, 100);
    report(
        4,
        "simplicial identities, algebra maps, Stokes, shuffle integrals, extension and contraction",
        &result,
    );
    assert!(result.total >= 100);
}

#[test]
fn criterion_5_kan_fillers() {
    let result = suite_kan_fillers(SEED, 4);
    report(
        5,
        "every generated compatible horn fills, with an independent face audit",
        &result,
    );
    assert!(result.total >= 100);
}

#[test]
fn criterion_6_homotopy_groups_and_products() {
    let result = suite_homotopy();
    report(
        6,
        "homotopy dimensions match twisted cohomology; Samelson products and connecting identity exact",
        &result,
    );
}

#[test]
fn criterion_7_integration_chain_map() {
    let result = suite_dold_kan(SEED, 100);
    report(
        7,
        "integration is a chain map, respects brackets, and normalizes volume classes (signed)",
        &result,
    );
    assert!(result.total >= 100);
}

#[test]
fn criterion_8_deligne_discreteness() {
    let result = suite_deligne(SEED);
    report(
        8,
        "discreteness criterion matches the grading on the corpus, with explicit witnesses",
        &result,
    );
}
