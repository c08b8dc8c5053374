use std::process::{Command, Output};

fn torsionlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torsionlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn predict_reports_the_even_bound() {
    let v = stdout_json(&torsionlab(&["predict", "--D", "1", "--m", "2"]));
    let lower = v["bound_lower"].as_f64().unwrap();
    assert!((lower - 0.2106).abs() < 1e-4);
    assert_eq!(v["bound_upper"].as_f64().unwrap(), 2.0 * lower);
    assert!(v["note"].is_null());
}

#[test]
fn homology_csv_has_the_fixed_header() {
    let out = torsionlab(&[
        "homology",
        "--D",
        "1",
        "--subgroup",
        "principal:2+i",
        "--m",
        "1",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "D,ideal,norm,index,kappa,m,h1_rank,log_torsion,ratio,bound_lower,bound_upper,checks_passed"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..7], ["1", "2+i", "5", "120", "6", "1", "12"]);
    assert_eq!(row[11], "true");
}

#[test]
fn homology_json_lists_every_check() {
    let v = stdout_json(&torsionlab(&[
        "homology",
        "--D",
        "1",
        "--subgroup",
        "principal:2+i",
        "--m",
        "2",
    ]));
    let checks = v["checks"].as_object().unwrap();
    assert_eq!(checks.len(), 7);
    assert!(checks.values().all(|b| b.as_bool() == Some(true)));
}

#[test]
fn gate_rejection_is_an_error() {
    let out = torsionlab(&[
        "homology",
        "--D",
        "1",
        "--subgroup",
        "principal:2",
        "--m",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("torsion-free"));
    let out = torsionlab(&["predict", "--D", "5", "--m", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_torsionlab"))
        .args([
            "sweep",
            "--D",
            "1",
            "--max-norm",
            "5",
            "--m",
            "1,2",
            "--out",
        ])
        .arg(&csv)
        .env("TORSIONLAB_THREADS", "2")
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    // Two ideals of norm 5, two weights.
    assert_eq!(text.lines().count(), 5);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(csv.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(report["records"].as_array().unwrap().len(), 4);
    assert!(!report["failures"].as_array().unwrap().is_empty());
}

#[test]
fn weights_and_cusp_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("w.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_torsionlab"))
        .args([
            "weights",
            "--D",
            "1",
            "--subgroup",
            "principal:2+i",
            "--m-max",
            "3",
            "--out",
        ])
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 4);

    let v = stdout_json(&torsionlab(&["cusp-shapes", "--D", "1", "--max-norm", "5"]));
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 2);
    assert_eq!(levels[0]["kappa"], 6);
}

#[test]
fn verify_suites_pass() {
    for suite in ["snf", "torsion"] {
        let out = torsionlab(&["verify", "--suite", suite]);
        assert!(out.status.success());
        assert!(String::from_utf8(out.stdout).unwrap().starts_with("pass"));
    }
    assert!(!torsionlab(&["verify", "--suite", "nope"]).status.success());
}
