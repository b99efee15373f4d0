//! Acceptance harness: runs every verification suite at its pinned
//! tolerances and prints one pass/fail line per criterion.

use thuekit::verify::{run_suite, SuiteId};

const SEED: u64 = 42;

fn check(number: usize, id: SuiteId) {
    let report = run_suite(id, SEED);
    let verdict = if report.passed { "PASS" } else { "FAIL" };
    println!("criterion {number:02} [{}] {} — {}", id.name(), verdict, report.summary);
    for f in &report.failures {
        println!("    {f}");
    }
    assert!(report.passed, "criterion {number} [{}] failed", id.name());
}

#[test]
fn criterion_01_f_modes_agree() {
    check(1, SuiteId::F);
}

#[test]
fn criterion_02_distacac_bounds() {
    check(2, SuiteId::Distacac);
}

#[test]
fn criterion_03_s_is_complete() {
    check(3, SuiteId::CompleteS);
}

#[test]
fn criterion_04_u_is_complete() {
    check(4, SuiteId::CompleteU);
}

#[test]
fn criterion_05_r_s_equivalent() {
    check(5, SuiteId::Equivalent);
}

#[test]
fn criterion_06_zero_class_linear_bound() {
    check(6, SuiteId::LdfCase1);
}

#[test]
fn criterion_07_nonzero_class_linear_bound() {
    check(7, SuiteId::LdfCase2);
}

#[test]
fn criterion_08_left_cancellation() {
    check(8, SuiteId::LeftCancel);
}

#[test]
fn criterion_09_no_regular_cross_section_instance() {
    check(9, SuiteId::Noregcs);
}

#[test]
fn criterion_10_context_monotonicity() {
    check(10, SuiteId::ContextMono);
}
