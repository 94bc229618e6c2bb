//! One test per acceptance criterion. Each prints a single PASS or FAIL line
//! straight to the terminal, bypassing the test harness's output capture.

use std::io::Write;

use gce_core::homology::{clear_memo, Config};
use gce_core::linalg::{CoeffMode, DEFAULT_PRIMES};
use gce_core::verify::{run_suite, Suite, SuiteReport, VerifyOptions};

fn announce(n: usize, title: &str, passed: bool, note: &str) {
    let status = if passed { "PASS" } else { "FAIL" };
    let line = if note.is_empty() {
        format!("\ncriterion {n} ({title}): {status}\n")
    } else {
        format!("\ncriterion {n} ({title}): {status} ({note})\n")
    };
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn suite_criterion(n: usize, title: &str, suite: Suite) {
    let report = run_suite(suite, &Config::default(), &VerifyOptions::default()).unwrap();
    let failed: Vec<String> = report.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect();
    let note = if failed.is_empty() {
        format!("{} checks", report.checks.len())
    } else {
        failed.join("; ")
    };
    announce(n, title, report.passed(), &note);
    assert!(report.passed(), "{}", report.to_text());
}

#[test]
fn criterion_1_identities() {
    suite_criterion(1, "identity suite", Suite::Identities);
}

#[test]
fn criterion_2_f_map() {
    suite_criterion(2, "F suite", Suite::Fmap);
}

#[test]
fn criterion_3_loop_order_three() {
    suite_criterion(3, "cohomology at loop order 3", Suite::Gc3);
}

#[test]
fn criterion_4_bv_graphs() {
    suite_criterion(4, "BVGraphs(1) truncation", Suite::Bvgraphs);
}

#[test]
fn criterion_5_extended_complex() {
    suite_criterion(5, "extended complex dimension match", Suite::ThmMain);
}

#[test]
fn criterion_6_psi() {
    suite_criterion(6, "lifting map", Suite::Psi);
}

#[test]
fn criterion_7_directed_comparison() {
    suite_criterion(7, "directed comparison", Suite::DirectedQiso);
}

fn report_under(suite: Suite, jobs: usize, mode: CoeffMode) -> SuiteReport {
    clear_memo();
    let cfg = Config {
        jobs: Some(jobs),
        coeff_mode: mode,
        ..Config::default()
    };
    run_suite(suite, &cfg, &VerifyOptions::default()).unwrap()
}

#[test]
fn criterion_8_determinism() {
    let mut differing = Vec::new();
    for suite in [Suite::Gc3, Suite::Bvgraphs, Suite::Psi, Suite::Fmap, Suite::ThmMain] {
        let a = report_under(suite, 1, CoeffMode::Exact);
        let b = report_under(suite, 2, CoeffMode::Modular(DEFAULT_PRIMES.to_vec()));
        let c = report_under(suite, 4, CoeffMode::Modular(vec![1_000_000_007, 998_244_353]));
        let texts = [a.to_text(), b.to_text(), c.to_text()];
        let json = [a, b, c].map(|r| serde_json::to_string(&r).unwrap());
        if texts.windows(2).any(|w| w[0] != w[1]) || json.windows(2).any(|w| w[0] != w[1]) {
            differing.push(suite.name());
        }
    }
    let note = if differing.is_empty() {
        "five suites under three worker counts and coefficient modes".to_string()
    } else {
        format!("reports differ for {}", differing.join(", "))
    };
    announce(8, "determinism and exactness", differing.is_empty(), &note);
    assert!(differing.is_empty());
}
