//! End-to-end checks of the command-line surface: exit codes, config
//! loading, flag overrides, and artifact emission.

use std::fs;
use std::process::Command;

fn fkdv() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fkdv"))
}

#[test]
fn alpha_zero_exits_with_invalid_config() {
    let out = fkdv()
        .args(["simulate", "--alpha", "0"])
        .output()
        .expect("binary runs");
    assert_eq!(
        out.status.code(),
        Some(2),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn alpha_outside_range_exits_with_invalid_config() {
    let out = fkdv().args(["scaling", "--alpha", "3.0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_writes_trajectory_csv() {
    let dir = std::env::temp_dir().join(format!("fkdv-cli-test-{}", std::process::id()));
    let cfg = dir.join("cfg.json");
    fs::create_dir_all(&dir).unwrap();
    fs::write(
        &cfg,
        r#"{"kind":"simulate","alpha":-0.5,"grid_n":32,"eps":0.05,"t_max":0.5,"n_sob":3,"seed":3}"#,
    )
    .unwrap();
    let out = fkdv()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.join("simulate.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(header, "t,L2,mean,Hn,grad_inf,E_1,E_2,E_3,tail_fraction");
    assert!(csv.lines().count() > 2);
    // flag overrides beat the config file
    let out = fkdv()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .args(["--alpha", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn energy_report_emits_json() {
    let out = fkdv()
        .args([
            "energy-report",
            "--grid-n",
            "32",
            "--eps",
            "0.02",
            "--alpha",
            "0.5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["config_hash"].is_string());
    assert!(doc["report"]["ratio"].as_f64().unwrap() > 0.0);
    assert!(doc["eps_star"].as_f64().unwrap() > 0.0);
}
