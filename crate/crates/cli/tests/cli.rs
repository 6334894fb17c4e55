use std::path::Path;
use std::process::{Command, Output};

use frobchar_cli::CharacterTableFile;

fn frobchar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobchar")).args(args).env_remove("FROBCHAR_CACHE_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn lusztig_e_lists_six_weights() {
    let o = frobchar(&["lusztig-e", "--type", "A1", "--p", "3", "--weight", "7", "--level", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows, ["(7)\t1", "(5)\t1", "(1)\t1", "(-1)\t1", "(-5)\t1", "(-7)\t1"]);
}

#[test]
fn steinberg_sweep_reports_all_pass() {
    let o = frobchar(&["steinberg-sweep", "--type", "A1", "--p", "3", "--max-weight", "30", "--level", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "30/30 pass");
}

#[test]
fn invalid_input_exits_with_json_error() {
    let o = frobchar(&["weyl-char", "--type", "A2", "--weight", "1,x"]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["category"], "domain");
    assert_eq!(err["field"], "weight");

    let o = frobchar(&["weyl-char", "--type", "A2", "--weight", "-1,0"]);
    assert_eq!(o.status.code(), Some(2));

    let o = frobchar(&["lusztig-e", "--type", "A1", "--p", "4", "--weight", "3"]);
    assert_eq!(o.status.code(), Some(2));

    let o = frobchar(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));

    let o = frobchar(&["qchar", "--mode", "expand", "--type", "B2", "--node", "1"]);
    assert_eq!(o.status.code(), Some(3));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["category"], "unsupported-configuration");
}

#[test]
fn exported_table_round_trips_and_feeds_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a2.json");
    let p = path.to_str().unwrap();
    let base = ["lusztig-e", "--type", "A2", "--p", "5", "--weight", "11,5", "--level", "2", "--format", "json"];
    let o = frobchar(&[&base[..], &["--export-e1-table", p]].concat());
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let file = CharacterTableFile::from_text(&text).unwrap();
    assert_eq!(file.to_text(), text);
    assert!(!file.entries.is_empty());

    let from_table = frobchar(&[&base[..], &["--e1-source", "table", "--table", p]].concat());
    assert!(from_table.status.success());
    let a: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&from_table.stdout).unwrap();
    assert_eq!(a["character"], b["character"]);
}

#[test]
fn output_is_deterministic() {
    let args = ["--format", "json", "lusztig-e", "--type", "B2", "--p", "7", "--weight", "8,1", "--level", "2"];
    let first = frobchar(&args);
    assert!(first.status.success());
    for _ in 0..3 {
        assert_eq!(frobchar(&args).stdout, first.stdout);
    }
}

fn kl_with_cache(dir: &Path) -> Output {
    frobchar(&["kl", "--group", "~A2", "--w", "0 1 2 0 1 2", "--interval", "--cache-dir", dir.to_str().unwrap()])
}

#[test]
fn kl_cache_warm_run_matches_cold() {
    let dir = tempfile::tempdir().unwrap();
    let cold = kl_with_cache(dir.path());
    assert!(cold.status.success());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let warm = kl_with_cache(dir.path());
    assert_eq!(cold.stdout, warm.stdout);
    let fresh = frobchar(&["kl", "--group", "~A2", "--w", "0 1 2 0 1 2", "--interval"]);
    assert_eq!(fresh.stdout, cold.stdout);
}

#[test]
fn verify_small_passes() {
    let o = frobchar(&["verify", "--scale", "small", "--parallel"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("11/11 criteria pass"));
}
