use std::path::Path;
use std::process::{Command, Output};

use qsc_cli::{build_report, cmd_list, tensor_value, Report, RunConfig, TensorRequest};

fn qsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsc-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn schema() -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("docs/report.schema.json");
    let raw: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&raw).expect("schema compiles")
}

fn assert_valid(report: &str) {
    let value: serde_json::Value = serde_json::from_str(report).unwrap();
    let schema = schema();
    let msgs: Vec<String> = match schema.validate(&value) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "report violates schema: {msgs:?}");
}

fn request(what: &str, manifold: &str, generator: &str, point: &str) -> TensorRequest {
    TensorRequest {
        what: what.into(),
        manifold: manifold.into(),
        k: None,
        generator: generator.into(),
        point: point.into(),
        diff: "analytic".into(),
        threshold: 1e-12,
    }
}

#[test]
fn flat_verify_exits_zero_and_writes_valid_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.json");
    let out = qsc(&[
        "verify",
        "--manifold",
        "flat",
        "--k",
        "2",
        "--generators",
        "zero,linear_j",
        "--points",
        "4",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("I-H4W") && stdout.contains("core: pass"));
    let report = std::fs::read_to_string(&path).unwrap();
    assert_valid(&report);
    let parsed: Report = serde_json::from_str(&report).unwrap();
    assert_eq!(parsed.points.len(), 4);
    assert!(parsed.summary.core_pass);
}

#[test]
fn nonkahler_verify_succeeds_through_expected_failures() {
    let out = qsc(&["verify", "--manifold", "conformal-nonkahler", "--points", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("expected-fail"));
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        &["verify", "--manifold", "fs", "--k", "9999"][..],
        &["verify", "--manifold", "torus"],
        &["verify", "--generators", "wobble"],
        &["verify", "--points", "0"],
        &["verify", "--diff", "fd7"],
        &["tensor", "--what", "d1", "--point", "1,0,0"],
        &["tensor", "--what", "d1", "--point", "1,zero"],
        &[
            "tensor",
            "--what",
            "g",
            "--manifold",
            "hyperbolic",
            "--point",
            "0.9,0.9",
        ],
        &["tensor", "--what", "nope", "--point", "0,0"],
        &["list", "shapes"],
        &["frobnicate"],
    ] {
        let out = qsc(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?} should explain itself");
    }
}

#[test]
fn tensor_command_prints_hand_values() {
    let out = qsc(&[
        "tensor",
        "--what",
        "d1",
        "--manifold",
        "flat",
        "--generator",
        "linear_j",
        "--point",
        "1,0,0,0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.lines().any(|l| l == "d1(x1,y1) = 2"), "{stdout}");

    let out = qsc(&[
        "tensor",
        "--what",
        "r1",
        "--generator",
        "linear_j",
        "--point",
        "-0.5,0.25",
    ]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("r1(y1; x1,y1,x1) = -2"));

    let out = qsc(&[
        "tensor",
        "--what",
        "h4",
        "--manifold",
        "flat",
        "--generator",
        "linear_j",
        "--point",
        "1,0,0,0",
    ]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("below"));
}

#[test]
fn tensor_values_match_library() {
    let (_, d1) = tensor_value(&request("d1", "flat", "linear_j", "1,0,0,0")).unwrap();
    assert_eq!(d1.get(&[0, 1]), 2.0);
    let (_, h4) = tensor_value(&request("h4", "fs", "random_poly:3", "0.1,0.2,-0.3,0.05")).unwrap();
    let (_, w) = tensor_value(&request("w", "fs", "zero", "0.1,0.2,-0.3,0.05")).unwrap();
    assert!((&h4 - &w).norm_max() < 1e-10);
    let (_, a) = tensor_value(&request("A", "flat", "zero", "0,0,0,0,0,0")).unwrap();
    assert_eq!(a.get(&[5, 4]), 1.0);
}

#[test]
fn list_reports_every_catalog() {
    let mut out = Vec::new();
    cmd_list(None, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let section = |name: &str| -> usize {
        text.split(&format!("{name}:\n"))
            .nth(1)
            .unwrap()
            .lines()
            .take_while(|l| l.starts_with("  "))
            .count()
    };
    assert_eq!(section("manifolds"), 4);
    assert_eq!(section("generators"), 5);
    assert_eq!(section("identities"), qsc_core::invariants::IDENTITIES.len());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    let report_path = dir.path().join("r.json");
    std::fs::write(
        &cfg_path,
        r#"{"manifold": "hyperbolic", "k": 1, "num_points": 3, "seed": 9, "generators": ["zero"]}"#,
    )
    .unwrap();
    let out = qsc(&[
        "verify",
        "--config",
        cfg_path.to_str().unwrap(),
        "--points",
        "2",
        "--report",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Report = serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report.config_echo.manifold, "hyperbolic");
    assert_eq!(report.config_echo.seed, 9);
    assert_eq!(report.config_echo.num_points, 2);
    assert_eq!(report.manifold.dim, 2);

    std::fs::write(&cfg_path, r#"{"manifold": "fs", "colour": "blue"}"#).unwrap();
    let out = qsc(&["verify", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn every_catalog_manifold_yields_a_schema_valid_report() {
    for manifold in ["flat", "fs", "hyperbolic", "conformal-nonkahler"] {
        let cfg = RunConfig {
            manifold: manifold.into(),
            num_points: 2,
            generators: vec!["zero".into(), "grad:cubic".into(), "const".into()],
            ..RunConfig::default()
        };
        let report = build_report(&cfg).unwrap();
        assert_valid(&report.to_json());
        let back: Report = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back, report);
    }
}
