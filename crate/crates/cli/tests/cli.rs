use std::fs;
use std::process::{Command, Output};

fn qotto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qotto")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn cycle_reports_unit_suffixed_fields() {
    let o = qotto(&["cycle"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["xi"].as_f64().unwrap() - 0.1463).abs() < 1e-3);
    assert!(v["work_hHz"].as_f64().unwrap() < 0.0);
    let eta = v["efficiency"].as_f64().unwrap();
    let otto = v["eta_otto"].as_f64().unwrap();
    assert!(eta > otto);
    assert_eq!(v["regime"], "EngineSuperOtto");
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        &["cycle", "--p-hot", "0.5"][..],
        &["cycle", "--p-cold", "0.7"],
        &["cycle", "--nu-hot", "1000"],
        &["cycle", "--steps", "10"],
        &["sweep", "region", "--p-hot-range", "0.4:0.9:5"],
        &["sweep", "region", "--xi-range", "0:0.5"],
        &["frobnicate"],
    ] {
        let o = qotto(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn not_enough_steps_for_long_ramp_exits_1() {
    let o = qotto(&["cycle", "--tau", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let o = qotto(&["sweep", "eta-phot", "--p-hot-range", "0.55:0.95:17", "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(String::from_utf8_lossy(&o.stderr).contains("17 rows"));
    }
    let text = fs::read(&a).unwrap();
    assert_eq!(text, fs::read(&b).unwrap());
    let header = String::from_utf8(text).unwrap().lines().next().unwrap().to_string();
    assert!(header.starts_with("p_hot_plus,xi_tau_0"));
    assert!(header.contains("eta_otto"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "nu_hot = 4000.0\np_hot = 0.9\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file: serde_json::Value = serde_json::from_str(&stdout(&qotto(&["cycle", "--config", cfg]))).unwrap();
    assert_eq!(from_file["nu_hot_Hz"], 4000.0);
    assert_eq!(from_file["p_hot_plus"], 0.9);

    let flagged: serde_json::Value =
        serde_json::from_str(&stdout(&qotto(&["cycle", "--config", cfg, "--p-hot", "0.7"]))).unwrap();
    assert_eq!(flagged["nu_hot_Hz"], 4000.0);
    assert_eq!(flagged["p_hot_plus"], 0.7);

    fs::write(dir.path().join("bad.toml"), "nu_hott = 1.0\n").unwrap();
    let o = qotto(&["cycle", "--config", dir.path().join("bad.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_sweep_has_columns_and_metadata() {
    let o = qotto(&["sweep", "xi-tau", "--tau-list", "1e-12,2e-4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["columns"], serde_json::json!(["tau_s", "xi"]));
    assert_eq!(v["metadata"]["kind"], "xi-tau");
    assert!((v["rows"][0][1].as_f64().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn verify_hygiene_fails_with_too_few_steps() {
    let o = qotto(&["verify", "--only", "10", "--steps", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("[FAIL] 10 numerical hygiene"));

    let ok = qotto(&["verify", "--only", "10"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("[PASS] 10"));
}
