//! End-to-end checks of the command-line interface: exit codes, report
//! shape, golden-file byte stability, and output routing.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_mirrorkit")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn arg(p: &Path) -> String {
    p.to_str().expect("utf8 path").to_string()
}

#[test]
fn triangle_fan_checks_out() {
    let out = run(&["fan-check", &arg(&fixture("p2_fan.json"))]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["quasiprojective"], true);
    assert_eq!(r["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn nonface_pair_is_reported_with_its_witness() {
    let out = run(&["fan-check", &arg(&fixture("bad_fan_nonface.json"))]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r["status"], "fail");
    let witness = r["violations"][0].as_str().unwrap();
    assert!(witness.contains("[0, 2]") && witness.contains("[1, 3]"), "{witness}");
}

#[test]
fn missing_file_is_an_input_error() {
    let out = run(&["fan-check", &arg(&fixture("no_such_fan.json"))]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read"));
}

#[test]
fn malformed_json_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{ this is not json").unwrap();
    let out = run(&["fan-check", &arg(&path)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not valid JSON"));
}

#[test]
fn bad_flag_values_are_input_errors() {
    let p2 = arg(&fixture("p2_fan.json"));
    for args in [
        vec!["bondal-homs", p2.as_str(), "--box", "notanumber"],
        vec!["bondal-homs", p2.as_str(), "--side", "C"],
        vec!["amoeba", p2.as_str(), "--t", "0.5"],
        vec!["amoeba", p2.as_str(), "--resolution", "4"],
        vec!["not-a-command"],
    ] {
        let out = run(&args);
        assert_eq!(code(&out), 2, "args {args:?}");
    }
}

#[test]
fn golden_reports_match_byte_for_byte() {
    let cases: [(&[&str], &str); 3] = [
        (&["spine", "p2_fan.json"], "golden/p2_spine.json"),
        (&["skeleton", "stackyskel_fan.json"], "golden/stackyskel_skeleton.json"),
        (&["bondal-homs", "p1_fan.json", "--box", "2"], "golden/p1_bondal_homs_box2.json"),
    ];
    for (args, golden) in cases {
        let mut full: Vec<String> = vec![args[0].into(), arg(&fixture(args[1]))];
        full.extend(args[2..].iter().map(|s| s.to_string()));
        let refs: Vec<&str> = full.iter().map(|s| s.as_str()).collect();
        let out = run(&refs);
        assert_eq!(code(&out), 0, "{args:?}");
        let expected = std::fs::read(fixture(golden)).unwrap();
        assert_eq!(out.stdout, expected, "report for {args:?} drifted from {golden}");
    }
}

#[test]
fn repeated_amoeba_runs_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let fan = arg(&fixture("p2_fan.json"));
    let mut outputs = Vec::new();
    for i in 0..2 {
        let json = dir.path().join(format!("r{i}.json"));
        let svg = dir.path().join(format!("r{i}.svg"));
        let out = run(&[
            "amoeba", &fan, "--t", "16", "--resolution", "64", "--seed", "9",
            "--json", &arg(&json), "--svg", &arg(&svg),
        ]);
        assert_eq!(code(&out), 0);
        outputs.push((std::fs::read(&json).unwrap(), std::fs::read(&svg).unwrap()));
    }
    assert_eq!(outputs[0].0, outputs[1].0, "JSON reports differ between runs");
    assert_eq!(outputs[0].1, outputs[1].1, "SVG renderings differ between runs");
}

#[test]
fn out_dir_env_var_redirects_relative_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(bin())
        .args(["spine", &arg(&fixture("p2_fan.json")), "--quiet", "--json", "report.json"])
        .env("MIRRORKIT_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let written = dir.path().join("report.json");
    assert!(written.exists(), "relative path should land under the override dir");
    let r: Value = serde_json::from_slice(&std::fs::read(written).unwrap()).unwrap();
    assert_eq!(r["command"], "spine");
}

#[test]
fn absolute_outputs_ignore_the_env_var() {
    let dir = tempfile::tempdir().unwrap();
    let decoy = tempfile::tempdir().unwrap();
    let target = dir.path().join("abs.json");
    let out = Command::new(bin())
        .args(["spine", &arg(&fixture("p2_fan.json")), "--quiet", "--json", &arg(&target)])
        .env("MIRRORKIT_OUT_DIR", decoy.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(target.exists());
}

#[test]
fn quiet_silences_stdout() {
    let out = run(&["fan-check", &arg(&fixture("a2_fan.json")), "--quiet"]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
}

#[test]
fn json_flag_routes_the_report_to_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = run(&["fan-check", &arg(&fixture("p1p1_fan.json")), "--json", &arg(&path)]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty(), "report goes to the file, not stdout");
    let r: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(r["status"], "pass");
}

#[test]
fn svg_output_is_svg() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spine.svg");
    let out = run(&["spine", &arg(&fixture("p2_fan.json")), "--quiet", "--svg", &arg(&path)]);
    assert_eq!(code(&out), 0);
    let content = std::fs::read_to_string(&path).unwrap();
    assert!(content.starts_with("<svg"), "unexpected prefix: {}", &content[..40]);
}

#[test]
fn unbounded_chamber_skips_the_poset_check() {
    let out = run(&[
        "spine",
        &arg(&fixture("a2_fan.json")),
        "--pl",
        &arg(&fixture("a2_lift.json")),
    ]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["region"]["bounded"], false);
    assert!(r.get("poset_antiequivalence").is_none());
}

#[test]
fn origin_outside_fails_the_construction() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("shifted.json");
    std::fs::write(&path, r#"{"rank":2,"vertices":[[1,0],[2,0],[1,1]]}"#).unwrap();
    let out = run(&["fan-from-polytope", &arg(&path)]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r["status"], "fail");
    assert!(r["error"].as_str().unwrap().contains("origin"));
}

#[test]
fn skew_triangle_constructs_a_valid_fan() {
    let out = run(&["fan-from-polytope", &arg(&fixture("skew_triangle_polytope.json"))]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["valid"], true);
    assert_eq!(r["fan"]["rays"].as_array().unwrap().len(), 3);
}

#[test]
fn amoeba_rejects_rank_one_input() {
    let out = run(&["amoeba", &arg(&fixture("p1_fan.json"))]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("rank 2"));
}

#[test]
fn boundary_check_runs_when_tolerance_is_given() {
    let out = run(&[
        "amoeba", &arg(&fixture("p2_fan.json")),
        "--t", "64", "--window", "6", "--resolution", "200", "--tolerance", "0.6", "--quiet",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn bondal_verify_accepts_the_bundled_fans() {
    for fan in ["a2_fan.json", "p2_fan.json", "p1p1_fan.json", "quotient22_fan.json"] {
        let out = run(&["bondal-verify", &arg(&fixture(fan)), "--box", "3", "--quiet"]);
        assert_eq!(code(&out), 0, "{fan}");
    }
}

#[test]
fn boundary_verify_accepts_the_bundled_fans() {
    for fan in ["p2_fan.json", "p1_fan.json", "stackyskel_fan.json"] {
        let out = run(&["boundary-verify", &arg(&fixture(fan)), "--box", "3", "--quiet"]);
        assert_eq!(code(&out), 0, "{fan}");
    }
}

#[test]
fn structural_violations_short_circuit_every_command() {
    let bad = arg(&fixture("bad_fan_nonface.json"));
    for args in [
        vec!["spine", bad.as_str()],
        vec!["skeleton", bad.as_str()],
        vec!["bondal-verify", bad.as_str()],
        vec!["boundary-verify", bad.as_str()],
        vec!["amoeba", bad.as_str()],
    ] {
        let out = run(&args);
        assert_eq!(code(&out), 1, "args {args:?}");
        let r = report(&out);
        assert!(r["violations"].as_array().is_some(), "args {args:?}");
    }
}
