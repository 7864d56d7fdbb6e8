//! The command-line verbs, flags and exit codes.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tangent-lab"))
}

fn configs() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs")
}

#[test]
fn list_experiments_names_all_ten() {
    let out = bin().arg("list-experiments").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 10);
    for name in ["axioms", "dirac-sweep", "embed-smear", "measure-consistency"] {
        assert!(text.contains(name));
    }
}

#[test]
fn every_example_config_validates() {
    for entry in std::fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        let out = bin().args(["validate", "--config"]).arg(&path).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{}: {}", path.display(), String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn validate_reports_issues_with_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "experiment = \"dirac-sweep\"\ndimension = 1\ngrid = 64\nhbars = [0.3]\ncolour = 1\n").unwrap();
    let out = bin().args(["validate", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("colour") && text.contains("0.3"), "{text}");

    let unknown = dir.path().join("typo.toml");
    std::fs::write(&unknown, "experiment = \"glue-chek\"\n").unwrap();
    let out = bin().args(["validate", "--config"]).arg(&unknown).output().unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("glue-check"));

    let missing = bin().args(["validate", "--config", "/nonexistent/config.toml"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn run_writes_artifacts_and_honours_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("glue");
    let out = bin()
        .args(["run", "--quiet", "--seed", "99", "--config"])
        .arg(configs().join("glue_check_su2.toml"))
        .arg("--output")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 99);
    assert_eq!(report["pass"], true);
    assert!(report["generated_unix"].as_u64().is_some());
    let csv = std::fs::read_to_string(out_dir.join("results.csv")).unwrap();
    assert!(csv.starts_with("hbar,gluing,diagonal,reversal\n"));
    assert!(std::fs::read_to_string(out_dir.join("plot.svg")).unwrap().contains("<polyline"));
}

#[test]
fn tolerance_failure_exits_two_and_still_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("coarse.toml");
    // at hbar = 1/4 the norms are still far from the sup norms
    std::fs::write(
        &cfg,
        "experiment = \"norm-continuity\"\ndimension = 1\ngrid = 8\nhbars = [\"1/2\", \"1/4\"]\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = bin().args(["run", "--quiet", "--config"]).arg(&cfg).arg("--output").arg(&out_dir).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], false);
}

#[test]
fn missing_required_field_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"experiment": "dirac-sweep", "dimension": 1, "grid": 64}"#).unwrap();
    let out = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("hbars"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["axioms.toml", "holonomy_refine.toml", "embed_smear.json"] {
        let mut outputs = Vec::new();
        for run in ["a", "b"] {
            let o = dir.path().join(format!("{name}-{run}"));
            let status = bin().args(["run", "--quiet", "--config"]).arg(configs().join(name)).arg("--output").arg(&o).status().unwrap();
            assert!(status.success());
            outputs.push(std::fs::read(o.join("results.csv")).unwrap());
        }
        assert_eq!(outputs[0], outputs[1], "{name}");
    }
}
