use std::path::Path;
use std::process::{Command, Output};

fn gl2lab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gl2lab"))
        .current_dir(dir)
        .args(args)
        .env_remove("GL2LAB_EPSILON")
        .env_remove("GL2LAB_QMAX")
        .output()
        .unwrap()
}

fn records(dir: &Path) -> Vec<serde_json::Value> {
    let mut paths: Vec<_> = std::fs::read_dir(dir.join("runs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap())
        .collect()
}

#[test]
fn delta_grid_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = gl2lab(dir.path(), &["verify", "delta", "--qmax", "15", "--nmax", "50"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("out/verify-delta.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("Q,n,delta,residual"));
    assert_eq!(lines.count(), 15 * 101);
    let rec = &records(dir.path())[0];
    assert_eq!(rec["command"], "verify delta");
    assert_eq!(rec["passed"], true);
    assert_eq!(rec["config_snapshot"]["tol"], "1e-9");
    assert_eq!(rec["config_snapshot"]["weight-tol"], "1e-12");
    assert!(rec["residuals"]["delta_max_residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn charsum_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = gl2lab(dir.path(), &["verify", "charsum", "--max", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("out/verify-charsum.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 144);
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = gl2lab(dir.path(), &["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    let out = gl2lab(dir.path(), &["verify", "delta", "--qmax", "many"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("qmax"));
}

#[test]
fn malformed_config_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.cfg"), "qmax = 3\nnmax 5\n").unwrap();
    let out = gl2lab(dir.path(), &["--config", "bad.cfg", "verify", "delta"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn tolerance_failure_names_the_residual() {
    let dir = tempfile::tempdir().unwrap();
    let out = gl2lab(dir.path(), &["verify", "delta", "--qmax", "3", "--nmax", "5", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("delta_max_residual"));
    assert_eq!(records(dir.path())[0]["passed"], false);
}

#[test]
fn precedence_and_ignored_keys() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.cfg"), "epsilon = 0.02\npoints = 2\ncolour = red\n").unwrap();
    let base = ["--config", "c.cfg", "sweep", "--tmin", "10", "--tmax", "20"];
    let out = gl2lab(dir.path(), &base);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
    let mut args = base.to_vec();
    args.extend(["--epsilon", "0.05"]);
    assert_eq!(gl2lab(dir.path(), &args).status.code(), Some(0));

    let recs = records(dir.path());
    assert_eq!(recs.len(), 2);
    assert_eq!(recs[0]["config_snapshot"]["epsilon"], "0.02");
    assert_eq!(recs[0]["config_snapshot"]["points"], "2");
    assert_eq!(recs[0]["ignored_keys"][0], "colour");
    assert_eq!(recs[1]["config_snapshot"]["epsilon"], "0.05");
    let csv = std::fs::read_to_string(dir.path().join("out/sweep.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("t,re_L,im_L,abs_L,convexity_ratio"));
    assert!(dir.path().join("out/sweep.gp").exists());
}

#[test]
fn environment_overrides_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.json"), r#"{"qmax": 4, "nmax": 3}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_gl2lab"))
        .current_dir(dir.path())
        .args(["--config", "c.json", "verify", "delta"])
        .env("GL2LAB_QMAX", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("out/verify-delta.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 7);
}

#[test]
fn records_are_append_only() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "delta", "--qmax", "2", "--nmax", "2"];
    gl2lab(dir.path(), &args);
    let first = std::fs::read_dir(dir.path().join("runs")).unwrap().next().unwrap().unwrap().path();
    let before = std::fs::read(&first).unwrap();
    gl2lab(dir.path(), &args);
    assert_eq!(records(dir.path()).len(), 2);
    assert_eq!(std::fs::read(&first).unwrap(), before);
}
