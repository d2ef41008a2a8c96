use std::process::{Command, Output};

fn perfdel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perfdel")).args(args).env("NO_COLOR", "1").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_g6() {
    let o = perfdel(&["verify", "--id", "G6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.lines().next().unwrap().starts_with("RECORD"));
    assert!(text.contains("51820"));
    assert!(!text.contains('\x1b'));
    assert!(text.lines().last().unwrap().contains("0 FAIL"));
}

#[test]
fn single_check_as_json() {
    let o = perfdel(&["verify", "--id", "D8_1", "--checks", "shortest-count", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["record"], "D8_1");
    assert_eq!(lines[0]["check"], "shortest-count");
    assert_eq!(lines[0]["computed"], "14");
    assert_eq!(lines[0]["status"], "PASS");
}

#[test]
fn placeholder_is_skipped() {
    let o = perfdel(&["verify", "--id", "D8_4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    for l in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(l).unwrap();
        assert_eq!(v["status"], "SKIPPED");
        assert_eq!(v["notes"][0], "source unavailable");
    }
}

#[test]
fn spectrum_mismatch_fails() {
    let o = perfdel(&["verify", "--id", "D8_12", "--checks", "spectrum"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn report_file_matches_json() {
    let dir = std::env::temp_dir().join(format!("perfdel-report-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.jsonl");
    let args = ["verify", "--id", "segment,G6", "--checks", "vertex-count,perfection"];
    let o = perfdel(&[&args[..], &["--report", path.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0));
    let json = perfdel(&[&args[..], &["--json"]].concat());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&json));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn timings_add_a_column() {
    let o = perfdel(&["verify", "--id", "segment", "--checks", "perfection", "--timings"]);
    assert!(stdout(&o).lines().next().unwrap().trim_end().ends_with("MS"));
}

#[test]
fn usage_errors() {
    assert_eq!(perfdel(&["verify", "--id", "D8_99"]).status.code(), Some(2));
    assert_eq!(perfdel(&["verify", "--checks", "volume"]).status.code(), Some(2));
    assert_eq!(perfdel(&["show", "E8"]).status.code(), Some(2));
    assert_eq!(perfdel(&["series", "6"]).status.code(), Some(2));
    assert_eq!(perfdel(&["expand", "[0,1"]).status.code(), Some(2));
    assert_eq!(perfdel(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn show_lists_vertices() {
    let o = perfdel(&["show", "G7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("vertices = 56"));
    assert_eq!(text.lines().filter(|l| l.starts_with("  (")).count(), 56);
    let o = perfdel(&["show", "D8_25"]);
    assert!(stdout(&o).contains("source unavailable"));
}

#[test]
fn series_runs() {
    let o = perfdel(&["series", "7", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("35"));
    assert!(text.contains("44"));
}

#[test]
fn expand_orbit() {
    let o = perfdel(&["expand", "[0,1^4;-2] × 5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn custom_catalog() {
    let dir = std::env::temp_dir().join(format!("perfdel-catalog-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("catalog.txt");
    std::fs::write(&path, include_str!("../../core/data/catalog.txt")).unwrap();
    let good = perfdel(&["--catalog", path.to_str().unwrap(), "verify", "--id", "segment"]);
    assert_eq!(good.status.code(), Some(0));
    std::fs::write(&path, "not a catalog").unwrap();
    let bad = perfdel(&["--catalog", path.to_str().unwrap(), "verify"]);
    assert_eq!(bad.status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}
