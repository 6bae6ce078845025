//! End-to-end checks of the binary's interface: exit codes, output
//! conventions and report determinism.

use std::path::Path;
use std::process::Command;

fn modsat() -> Command {
    Command::new(env!("CARGO_BIN_EXE_modsat"))
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn solve_trivial_sat_exits_10_with_model() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("sat.cnf");
    write(&cnf, "p cnf 2 2\n1 -2 0\n2 0\n");
    let out = modsat().arg("solve").arg(&cnf).output().unwrap();
    assert_eq!(out.status.code(), Some(10));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("s SATISFIABLE"));
    let vline = stdout
        .lines()
        .find(|l| l.starts_with("v "))
        .expect("model line");
    assert!(vline.ends_with(" 0"));
}

#[test]
fn solve_trivial_unsat_exits_20() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("unsat.cnf");
    write(&cnf, "p cnf 1 2\n1 0\n-1 0\n");
    let out = modsat().arg("solve").arg(&cnf).output().unwrap();
    assert_eq!(out.status.code(), Some(20));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("s UNSATISFIABLE"));
}

#[test]
fn solve_timeout_exits_0_with_unknown() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("hard.cnf");
    // A hard unsat pigeonhole instance plus an effectively zero timeout.
    let out = modsat()
        .arg("gen")
        .args([
            "--family",
            "pigeonhole",
            "--pigeons",
            "9",
            "--holes",
            "8",
            "--count",
            "1",
        ])
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    std::fs::rename(dir.path().join("pigeonhole-000.cnf"), &cnf).unwrap();
    let out = modsat()
        .arg("solve")
        .arg(&cnf)
        .args(["--timeout", "0.000001"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("s UNKNOWN"));
}

#[test]
fn unknown_subcommand_and_bad_flags_exit_1() {
    let out = modsat().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = modsat().args(["bench", "--no-such-flag"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    // Semantic usage error: missing dataset.
    let out = modsat().arg("bench").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn runtime_failure_exits_2() {
    let out = modsat()
        .args(["solve", "/nonexistent/instance.cnf"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_reports_par2_worked_example_from_stubbed_records() {
    // Records with times (80, 120, fail) against a 100 second bound come out
    // at PAR-2 = 160 with one solved instance.
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("records.jsonl");
    let stats = r#""stats":{"conflicts":0,"decisions":0,"propagations":0,"restarts":0,"rephase_events":0,"reduce_events":0,"learnt_clauses":0,"gc_events":0}"#;
    write(
        &records,
        &format!(
            "{}\n{}\n{}\n",
            format_args!(
                r#"{{"instance":"i1","status":"Sat","wall_time":80.0,{stats},"suite":"s","seed":0}}"#
            ),
            format_args!(
                r#"{{"instance":"i2","status":"Sat","wall_time":120.0,{stats},"suite":"s","seed":0}}"#
            ),
            format_args!(
                r#"{{"instance":"i3","status":"Unknown","wall_time":100.0,{stats},"suite":"s","seed":0}}"#
            ),
        ),
    );
    let out = modsat()
        .args(["report", "--timeout", "100"])
        .arg("--records")
        .arg(&records)
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(
        stdout.contains("par2=160.000000 solved=1/3"),
        "got: {stdout}"
    );
}

#[test]
fn bench_is_byte_deterministic_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let ds = dir.path().join("ds");
    let status = modsat()
        .args([
            "gen",
            "--family",
            "random-3sat",
            "--count",
            "4",
            "--vars",
            "25",
            "--seed",
            "9",
        ])
        .args(["--training-timeout", "0.5"])
        .arg("--out")
        .arg(&ds)
        .status()
        .unwrap();
    assert!(status.success());
    let run = |tag: &str| {
        let report = dir.path().join(format!("report-{tag}.json"));
        let out = modsat()
            .arg("bench")
            .arg("--dataset")
            .arg(ds.join("manifest.json"))
            .args([
                "--timeout",
                "0.5",
                "--jobs",
                "3",
                "--seed",
                "7",
                "--time-model",
                "ticks",
            ])
            .arg("--out")
            .arg(&report)
            .output()
            .unwrap();
        assert!(out.status.success());
        std::fs::read(&report).unwrap()
    };
    assert_eq!(run("a"), run("b"), "reports must be byte-identical");
}

#[test]
fn gen_then_solve_roundtrip_subprocess_bench() {
    let dir = tempfile::tempdir().unwrap();
    let ds = dir.path().join("ds");
    assert!(modsat()
        .args([
            "gen",
            "--family",
            "random-3sat",
            "--count",
            "2",
            "--vars",
            "20",
            "--seed",
            "4"
        ])
        .arg("--out")
        .arg(&ds)
        .status()
        .unwrap()
        .success());
    let out = modsat()
        .arg("bench")
        .arg("--dataset")
        .arg(ds.join("manifest.json"))
        .args(["--timeout", "5", "--subprocess"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("solved=2/2"), "got: {stdout}");
}

#[test]
fn gen_preset_fills_manifest_from_training_table() {
    let dir = tempfile::tempdir().unwrap();
    let ds = dir.path().join("eda");
    assert!(modsat()
        .args([
            "gen",
            "--family",
            "random-3sat",
            "--count",
            "2",
            "--vars",
            "20",
            "--seed",
            "1"
        ])
        .args(["--preset", "eda"])
        .arg("--out")
        .arg(&ds)
        .status()
        .unwrap()
        .success());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(ds.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["training_timeout_s"], 800.0);
    assert_eq!(
        manifest["function_candidates"],
        serde_json::json!([2, 5, 6, 7])
    );
}

#[test]
fn presearch_and_evolve_outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let ds = dir.path().join("ds");
    assert!(modsat()
        .args([
            "gen",
            "--family",
            "random-3sat",
            "--count",
            "4",
            "--vars",
            "25",
            "--seed",
            "2"
        ])
        .args(["--training-timeout", "0.5"])
        .arg("--out")
        .arg(&ds)
        .status()
        .unwrap()
        .success());
    let run = |cmd: &str, tag: &str, extra: &[&str]| {
        let out_path = dir.path().join(format!("{cmd}-{tag}.json"));
        let out = modsat()
            .arg(cmd)
            .arg("--dataset")
            .arg(ds.join("manifest.json"))
            .args(["--seed", "11", "--time-model", "ticks"])
            .args(extra)
            .arg("--out")
            .arg(&out_path)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{cmd} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        std::fs::read(&out_path).unwrap()
    };
    assert_eq!(
        run("presearch", "a", &[]),
        run("presearch", "b", &[]),
        "presearch outputs must be byte-identical"
    );
    let extra = ["--budget", "6", "--candidates", "4,5"];
    assert_eq!(
        run("evolve", "a", &extra),
        run("evolve", "b", &extra),
        "evolve outputs must be byte-identical"
    );
}

#[test]
fn strict_mode_rejects_header_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("mismatch.cnf");
    write(&cnf, "p cnf 1 5\n1 0\n");
    let out = modsat()
        .arg("solve")
        .arg(&cnf)
        .arg("--strict")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    // Without --strict it solves and warns.
    let out = modsat().arg("solve").arg(&cnf).output().unwrap();
    assert_eq!(out.status.code(), Some(10));
    assert!(String::from_utf8(out.stdout).unwrap().contains("c warning"));
}
