use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_zeno-lab"))
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

const SMALL_CONVERGENCE: &str = r#"{
  "experiment": "convergence",
  "model": {"id": "cptp_kick_82", "q": 0.3, "gamma_t": 2.0},
  "n_list": [7, 8, 15, 16, 31, 32],
  "output": {"path": "small"}
}"#;

#[test]
fn shipped_configs_validate() {
    let mut count = 0;
    for entry in fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        let out = run(&["validate", "--config", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}: {}", path.display(), String::from_utf8_lossy(&out.stderr));
        count += 1;
    }
    assert!(count >= 5);
}

#[test]
fn validate_reports_missing_n_list() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", r#"{"experiment": "convergence", "model": {"id": "weak_meas_81"}}"#);
    let out = run(&["validate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_list"));
}

#[test]
fn validate_rejects_projective_q() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "q1.json",
        r#"{"experiment": "convergence", "model": {"id": "cycle_83", "q": 1.0}, "n_list": [8]}"#,
    );
    let out = run(&["validate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("q < 1"));
}

#[test]
fn unknown_fields_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "typo.json", r#"{"experiment": "bch_check", "seed": 1, "n_list": [8], "nlist": [8]}"#);
    let out = run(&["validate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_writes_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.json", SMALL_CONVERGENCE);
    let mut bodies = Vec::new();
    for sub in ["a", "b"] {
        let out_dir = dir.path().join(sub);
        let out = run(&["run", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        bodies.push(fs::read(out_dir.join("small.csv")).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
    let text = String::from_utf8(bodies.remove(0)).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,n,parity,distance"));
    assert_eq!(lines.count(), 6);
    assert!(!text.contains('\r'));
}

#[test]
fn format_flag_switches_to_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.json", SMALL_CONVERGENCE);
    let out_dir = dir.path().join("out");
    let out = run(&["run", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&fs::read(out_dir.join("small.json")).unwrap()).unwrap();
    assert!(v.is_object());
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bch.json",
        r#"{"experiment": "bch_check", "seed": 1, "dim": 2, "n_list": [16, 32, 64], "output": {"path": "bch"}}"#,
    );
    let read = |seed: Option<&str>, sub: &str| {
        let out_dir = dir.path().join(sub);
        let mut args = vec!["run", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap(), "--quiet"];
        if let Some(s) = seed {
            args.extend(["--seed", s]);
        }
        let out = run(&args);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
        fs::read_to_string(out_dir.join("bch.csv")).unwrap()
    };
    let default = read(None, "a");
    let same = read(Some("1"), "b");
    let other = read(Some("2"), "c");
    assert_eq!(default, same);
    assert_ne!(default, other);
}

#[test]
fn thread_cap_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.json", SMALL_CONVERGENCE);
    let mut bodies = Vec::new();
    for (sub, threads) in [("one", "1"), ("four", "4")] {
        let out_dir = dir.path().join(sub);
        let out = bin()
            .env("ZENO_LAB_THREADS", threads)
            .args(["run", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(out.status.success());
        bodies.push(fs::read(out_dir.join("small.csv")).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
}

#[test]
fn missing_config_is_an_io_error() {
    let out = run(&["run", "--config", "/nonexistent/zeno.json"]);
    assert_eq!(out.status.code(), Some(1));
}
