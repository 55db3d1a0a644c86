//! Emitted CSVs against goldens written by tools/completeness_oracle.py.

mod common;

use std::fs;

use ontobench_core::report::{emit_reports, run_pipeline, Format};

const FILES: [&str; 7] = [
    "completeness_haystack.csv",
    "completeness_haystack_counts.csv",
    "completeness_brick.csv",
    "completeness_brick_counts.csv",
    "gaps_haystack.csv",
    "gaps_brick.csv",
    "unresolved_tokens.csv",
];

fn check(fixture: &str) {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = common::config(fixture, tmp.path());
    let bundle = run_pipeline(&cfg).unwrap();
    emit_reports(&bundle, &[Format::Csv], tmp.path()).unwrap();
    for f in FILES {
        let got = fs::read(tmp.path().join(f)).unwrap();
        let want = fs::read(common::fixtures().join(fixture).join("golden").join(f)).unwrap();
        assert!(got == want, "{fixture}/{f} differs:\n--- got\n{}\n--- want\n{}", String::from_utf8_lossy(&got), String::from_utf8_lossy(&want));
    }
}

#[test]
fn mini_matches_goldens() {
    check("mini");
}

#[test]
fn hvac440_matches_goldens() {
    check("hvac440");
}
