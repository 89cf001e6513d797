//! The ten acceptance criteria. Each prints one PASS/FAIL line; the test
//! fails if any criterion does.

use std::process::Command;

use weilmod::selfcheck;

const SEED: u64 = 42;

fn line(n: u32, name: &str, pass: bool, detail: &str) -> bool {
    println!("criterion {n}: {} {name} ({detail})", if pass { "PASS" } else { "FAIL" });
    pass
}

fn determinism() -> (bool, String) {
    let run = || Command::new(env!("CARGO_BIN_EXE_weilmod")).args(["selfcheck", "--seed", "42"]).output().expect("spawn weilmod");
    let a = run();
    let b = run();
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    let ok = a.status.success() && b.status.success();
    (same && ok, format!("{} bytes, identical: {same}, exit codes: {:?}/{:?}", a.stdout.len(), a.status.code(), b.status.code()))
}

#[test]
fn acceptance_criteria() {
    let mut all = true;
    for &(id, name) in selfcheck::SUITES.iter() {
        let r = selfcheck::run_suite(id, SEED).expect("known suite");
        let mut detail = format!("{} checks, {} failures", r.checks, r.failures);
        for n in &r.notes {
            detail.push_str("; ");
            detail.push_str(n);
        }
        all &= line(id, name, r.passed(), &detail);
    }
    let (pass, detail) = determinism();
    all &= line(10, "selfcheck-determinism", pass, &detail);
    assert!(all, "some acceptance criteria failed");
}
