//! Acceptance suite: one test, hence one PASS/FAIL line, per criterion.

use higgs_core::selftest::{run_criterion, DEFAULT_SEED};

fn criterion(index: usize) {
    let report = run_criterion(index, DEFAULT_SEED).expect("criterion exists");
    println!("{report}");
    assert!(report.passed, "{report}");
}

#[test]
fn criterion_01_relations() {
    criterion(1);
}

#[test]
fn criterion_02_basis() {
    criterion(2);
}

#[test]
fn criterion_03_crystal_axioms() {
    criterion(3);
}

#[test]
fn criterion_04_ladder_lemma() {
    criterion(4);
}

#[test]
fn criterion_05_connectedness() {
    criterion(5);
}

#[test]
fn criterion_06_figures() {
    criterion(6);
}

#[test]
fn criterion_07_semicanonical_torsion() {
    criterion(7);
}

#[test]
fn criterion_08_chi_engine() {
    criterion(8);
}

#[test]
fn criterion_09_kernel_lemma() {
    criterion(9);
}

#[test]
fn criterion_10_truncation_stability() {
    criterion(10);
}
