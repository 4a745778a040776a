//! End-to-end CLI contract tests: exit codes, report schema, round-trip
//! serialization, and seed determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_popcheck"))
        .args(args)
        .output()
        .expect("popcheck binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("bad JSON: {e}\n{text}"))
}

#[test]
fn exit_code_holds() {
    let out = run(&["eval", "--ineq", "popoviciu", "--fn", "power:2", "--triple", "0", "0", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["residual"], 1.0);
    assert_eq!(v["verdict"], "holds");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "eval");
}

#[test]
fn exit_code_violation() {
    // Concave function violates the classic inequality.
    let out = run(&["eval", "--ineq", "popoviciu", "--fn", "power:0.5", "--triple", "1", "1", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["verdict"], "violated");
}

#[test]
fn exit_code_usage_errors() {
    // unknown function
    let out = run(&["eval", "--ineq", "popoviciu", "--fn", "nope", "--triple", "1", "2", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown function"));
    // unknown inequality
    let out = run(&["eval", "--ineq", "nope", "--fn", "exp", "--triple", "1", "2", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown inequality"));
    // domain violation
    let out = run(&["eval", "--ineq", "popoviciu", "--fn", "log", "--triple", "-1", "2", "3"]);
    assert_eq!(out.status.code(), Some(1));
    // missing flag
    let out = run(&["eval", "--ineq", "popoviciu", "--triple", "1", "2", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--fn"));
}

#[test]
fn triple_identity_point() {
    let out = run(&["eval", "--ineq", "popoviciu", "--fn", "power:2", "--triple", "1", "1", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["residual"], 0.0);
}

#[test]
fn json_round_trip_is_bit_exact() {
    let dir = std::env::temp_dir().join("popcheck-roundtrip");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = run(&[
        "eval", "--ineq", "popoviciu", "--fn", "exp", "--triple", "0.1", "1.3", "1.9",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let printed = stdout_json(&out);
    let written: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(printed, written);
    // Re-serializing the parsed floats reproduces the same bits.
    for key in ["lhs", "rhs", "residual", "tolerance"] {
        let x = printed[key].as_f64().unwrap();
        let reparsed: f64 = serde_json::to_string(&x)
            .and_then(|s| serde_json::from_str(&s))
            .unwrap();
        assert_eq!(x.to_bits(), reparsed.to_bits(), "{key}");
    }
}

#[test]
fn csv_has_header_and_row() {
    let out = run(&[
        "eval", "--ineq", "agm-log", "--triple", "2", "3", "5", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "schema_version,command,inequality_id,inputs,lhs,rhs,residual,verdict,tolerance,hypothesis_flags,witness,timing_ms"
    );
    let row = lines.next().unwrap();
    assert!(row.starts_with("1,eval,agm-log,"));
    assert!(row.contains("holds"));
}

#[test]
fn sweep_seed_determinism() {
    let args = [
        "sweep", "--ineq", "popoviciu", "--fn", "exp", "--region", "0", "2",
        "--samples", "500", "--seed", "42",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    let (mut va, mut vb) = (stdout_json(&a), stdout_json(&b));
    // timing differs between runs; everything else must match exactly
    va["timing_ms"] = 0.into();
    vb["timing_ms"] = 0.into();
    assert_eq!(va, vb);
}

#[test]
fn sweep_seed_env_fallback() {
    let base = [
        "sweep", "--ineq", "popoviciu", "--fn", "exp", "--region", "0", "2", "--samples", "200",
    ];
    let via_env = Command::new(env!("CARGO_BIN_EXE_popcheck"))
        .args(base)
        .env("POPCHECK_SEED", "7")
        .output()
        .unwrap();
    let mut with_flag = base.to_vec();
    with_flag.extend(["--seed", "7"]);
    let via_flag = run(&with_flag);
    let (mut ve, mut vf) = (stdout_json(&via_env), stdout_json(&via_flag));
    ve["timing_ms"] = 0.into();
    vf["timing_ms"] = 0.into();
    assert_eq!(ve, vf);
}

#[test]
fn sweep_detects_violations() {
    let out = run(&[
        "sweep", "--ineq", "popoviciu", "--fn", "power:0.5", "--region", "0", "9",
        "--samples", "500", "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "violated");
    assert!(v["residual"].as_f64().unwrap() < 0.0);
}

#[test]
fn search_exit_codes() {
    let out = run(&["search", "--ineq", "popoviciu", "--fn", "exp", "--region", "0", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verdict"], "no_violation_found");

    let out = run(&[
        "search", "--ineq", "hpop", "--fn", "power:0.5", "--h", "power:0.5",
        "--region", "0", "10",
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["search", "--ineq", "popoviciu", "--fn", "power:0.5", "--region", "0", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["verdict"], "violation_certified");
}

#[test]
fn classify_reports() {
    let out = run(&[
        "classify", "--fn", "gamma", "--phi", "identity", "--psi", "log",
        "--region", "1.1", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verdict"], "convex");

    let out = run(&[
        "classify", "--fn", "hyp2f1:0.5:0.5:0.75", "--phi", "identity", "--psi", "power:-1",
        "--region", "0.05", "0.95",
    ]);
    assert_eq!(stdout_json(&out)["verdict"], "convex");

    let out = run(&["classify", "--fn", "power:0.5", "--h", "power:0.5", "--region", "0", "10"]);
    assert_eq!(stdout_json(&out)["verdict"], "h-convex");
}

#[test]
fn means_command() {
    let out = run(&["means", "--phi", "log", "--points", "4", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!((v["lhs"].as_f64().unwrap() - 6.0).abs() < 1e-12);

    let out = run(&["means", "--fn", "logmean3", "--points", "1", "4", "9"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["means", "--phi", "identity", "--points", "1", "3", "--weights", "0.25", "0.75"]);
    let v = stdout_json(&out);
    assert!((v["lhs"].as_f64().unwrap() - 2.5).abs() < 1e-12);
}

#[test]
fn config_file_defaults_and_overrides() {
    let dir = std::env::temp_dir().join("popcheck-config");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("defaults.conf");
    std::fs::write(
        &path,
        "# sweep defaults\nineq = popoviciu\nfn = exp\nregion = 0 2\nsamples = 100\nseed = 3\n",
    )
    .unwrap();
    let from_config = run(&["sweep", "--config", path.to_str().unwrap()]);
    assert_eq!(from_config.status.code(), Some(0));
    let explicit = run(&[
        "sweep", "--ineq", "popoviciu", "--fn", "exp", "--region", "0", "2",
        "--samples", "100", "--seed", "3",
    ]);
    let (mut vc, mut ve) = (stdout_json(&from_config), stdout_json(&explicit));
    vc["timing_ms"] = 0.into();
    ve["timing_ms"] = 0.into();
    assert_eq!(vc, ve);

    // flags override file values: the overridden function is concave
    let overridden = run(&[
        "sweep", "--config", path.to_str().unwrap(), "--fn", "power:0.5",
        "--region", "0", "9",
    ]);
    assert_eq!(overridden.status.code(), Some(2));
}
