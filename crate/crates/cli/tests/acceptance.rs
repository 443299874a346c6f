//! One line per acceptance criterion. Runs `verify-all --seed 7` twice
//! through the real binary; the second run only feeds criterion 10.

use std::path::Path;
use std::process::{Command, ExitCode};

use serde_json::Value;

const SEED: &str = "7";

/// Wall-clock ceilings in seconds, by criterion id.
const RUNTIME_LIMITS: [(u64, f64); 3] = [(1, 60.0), (2, 120.0), (7, 90.0)];

fn verify_all(out: &Path) -> (i32, Value, Vec<f64>) {
    let status = Command::new(env!("CARGO_BIN_EXE_helson-lab"))
        .arg("--out")
        .arg(out)
        .args(["verify-all", "--seed", SEED])
        .stdout(std::process::Stdio::null())
        .status()
        .expect("binary runs");
    let read = |name: &str| -> Value { serde_json::from_slice(&std::fs::read(out.join(name)).expect(name)).unwrap() };
    let times = read("manifest.json")["criterion_seconds"]
        .as_array()
        .expect("criterion_seconds")
        .iter()
        .map(|t| t.as_f64().unwrap())
        .collect();
    (status.code().unwrap_or(-1), read("verify.json"), times)
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("run1"), dir.path().join("run2"));
    let (code, report, times) = verify_all(&a);

    let mut all = true;
    for (c, t) in report["criteria"].as_array().unwrap().iter().zip(&times) {
        let id = c["id"].as_u64().unwrap();
        let limit = RUNTIME_LIMITS.iter().find(|l| l.0 == id).map(|l| l.1);
        let in_time = limit.is_none_or(|l| *t <= l);
        let passed = c["passed"].as_bool().unwrap() && in_time;
        all &= passed;
        let budget = limit.map_or(String::new(), |l| format!(" (limit {l:.0}s)"));
        println!(
            "[{}] {:>2} {:<26} {:>7.2}s{budget}  {}",
            if passed { "PASS" } else { "FAIL" },
            id,
            c["name"].as_str().unwrap(),
            t,
            c["summary"].as_str().unwrap()
        );
    }

    verify_all(&b);
    let same = std::fs::read(a.join("verify.json")).unwrap() == std::fs::read(b.join("verify.json")).unwrap();
    all &= same;
    println!(
        "[{}] 10 {:<26} verify.json byte-identical across two runs: {same}",
        if same { "PASS" } else { "FAIL" },
        "determinism"
    );

    let exit_ok = code == if report["all_passed"] == true { 0 } else { 1 };
    if !exit_ok {
        println!("verify-all exit code {code} disagrees with all_passed");
    }
    if all && exit_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
