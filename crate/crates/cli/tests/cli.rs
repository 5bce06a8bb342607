use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const TWO_VERTEX: &str = r#"{"type":"finite_shift","vertices":["0","1"],"edges":[
{"id":"00","from":"0","to":"0","weight":3},{"id":"01","from":"0","to":"1","weight":1},
{"id":"10","from":"1","to":"0","weight":1},{"id":"11","from":"1","to":"1","weight":2}]}"#;

const SHIFT2: &str = r#"{"type":"finite_shift","vertices":["0","1"],"edges":[
{"id":"00","from":"0","to":"0"},{"id":"01","from":"0","to":"1"},
{"id":"10","from":"1","to":"0"},{"id":"11","from":"1","to":"1"}]}"#;

const ROTATION: &str = r#"{"type":"rotation","alpha":"0.61803398874989484820","observable":{"constant":0.0,"cos":[1.0],"sin":[]}}"#;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        let ws = Self { dir: TempDir::new().unwrap() };
        ws.file("two.json", TWO_VERTEX);
        ws.file("shift2.json", SHIFT2);
        ws.file("rot.json", ROTATION);
        ws.file("u0.json", r#"{"weights":{"00":0,"01":0,"10":1,"11":1}}"#);
        ws.file("cob.json", r#"{"weights":{"00":0,"01":1,"10":-1,"11":0}}"#);
        ws
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let p = self.path(name);
        fs::write(&p, body).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_ergopt"))
            .current_dir(self.dir.path())
            .args(args)
            .output()
            .unwrap()
    }
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn read(p: &Path) -> String {
    fs::read_to_string(p).unwrap()
}

#[test]
fn minmean_writes_value_and_witness() {
    let ws = Workspace::new();
    let out = ws.run(&["minmean", "--system", "two.json", "--out", "out.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&read(&ws.path("out.json"))).unwrap();
    assert_eq!(doc["fbar"], "1");
    assert_eq!(doc["witness_cycle"], serde_json::json!(["01", "10"]));
    assert_eq!(doc["method"], "karp");
}

#[test]
fn brute_force_agrees_with_karp() {
    let ws = Workspace::new();
    let out = ws.run(&["minmean", "--system", "two.json", "--method", "brute-force"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["fbar"], "1");
}

#[test]
fn missing_file_is_a_usage_error() {
    let ws = Workspace::new();
    let out = ws.run(&["minmean", "--system", "missing.json"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));
}

#[test]
fn malformed_input_and_bad_flags_exit_2() {
    let ws = Workspace::new();
    ws.file("bad.json", "{\"type\":\"finite_shift\"");
    assert_eq!(code(&ws.run(&["minmean", "--system", "bad.json"])), 2);
    assert_eq!(code(&ws.run(&["frobnicate"])), 2);
    assert_eq!(code(&ws.run(&["discounted", "--system", "two.json", "--eps-list", "1.5"])), 2);
    let out = Command::new(env!("CARGO_BIN_EXE_ergopt"))
        .current_dir(ws.dir.path())
        .env("ERGOPT_THREADS", "many")
        .args(["minmean", "--system", "two.json"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn oscillate_emits_three_rows_within_tolerance() {
    let ws = Workspace::new();
    let out = ws.run(&[
        "oscillate", "--system", "shift2.json", "--u", "u0.json", "--n1", "9", "--pmax", "3", "--w0", "00", "--w1", "11",
        "--out", "osc.csv", "--schedule-out", "schedule.json", "--plot", "osc.svg",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_path(ws.path("osc.csv")).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        ["p", "eps_p", "U_value", "target", "abs_error", "contamination_estimate"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    let err = |i: usize| rows[i][4].parse::<f64>().unwrap();
    assert!(err(1) < 0.05 && err(2) < 0.05);
    let schedule: serde_json::Value = serde_json::from_str(&read(&ws.path("schedule.json"))).unwrap();
    assert_eq!(schedule["N"][0], "9");
    assert_eq!(schedule["N"][1], "8104");
    assert!(read(&ws.path("osc.svg")).starts_with("<svg"));
}

#[test]
fn outputs_are_deterministic() {
    let ws = Workspace::new();
    for args in [
        &["sweep", "--system", "shift2.json", "--u", "cob.json"][..],
        &["discounted", "--system", "two.json", "--random-points", "20", "--seed", "7"][..],
        &["oscillate", "--system", "shift2.json", "--u", "u0.json", "--format", "json"][..],
    ] {
        let a = ws.run(args);
        let b = ws.run(args);
        assert_eq!(code(&a), 0, "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn sweep_exit_codes_follow_balance() {
    let ws = Workspace::new();
    let out = ws.run(&["sweep", "--system", "shift2.json", "--u", "cob.json", "--plot", "sweep.svg"]);
    assert_eq!(code(&out), 0);
    assert!(read(&ws.path("sweep.svg")).contains("<svg"));

    let out = ws.run(&["sweep", "--system", "shift2.json", "--u", "u0.json"]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not balanced") && err.contains("\"00\""), "{err}");

    let out = ws.run(&["sweep", "--system", "rot.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verification_commands_pass_on_examples() {
    let ws = Workspace::new();
    for args in [
        &["morris", "--system", "two.json"][..],
        &["subaction", "--system", "two.json"][..],
        &["subaction", "--system", "two.json", "--format", "json"][..],
        &["subaction", "--system", "rot.json", "--horizon", "1000"][..],
        &["corollary", "--system", "shift2.json", "--u", "u0.json"][..],
        &["dce-check", "--system", "two.json", "--method", "direct"][..],
        &["lemma2", "--system", "shift2.json", "--u", "u0.json"][..],
        &["decompose", "--system", "shift2.json", "--obs", "u0.json", "--grid"][..],
        &["balance", "--system", "shift2.json", "--u", "u0.json"][..],
        &["mather", "--system", "two.json"][..],
    ] {
        let out = ws.run(args);
        assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn subaction_json_reports_pass() {
    let ws = Workspace::new();
    let out = ws.run(&["subaction", "--system", "two.json", "--out", "sub.json"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&read(&ws.path("sub.json"))).unwrap();
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["min_defect"], "0");
}
