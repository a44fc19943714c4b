use std::io::Write;
use std::process::{Command, Output, Stdio};

fn regfam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regfam")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn single_commands() {
    let o = regfam(&["iota", "S[2]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "w^2");

    let o = regfam(&["rank", "S", "{5,6}"]);
    assert_eq!(stdout(&o).trim(), "3");

    let o = regfam(&["norm", "T(1/2,S)", "[3:1,4:1,5:1]"]);
    assert_eq!(stdout(&o).trim(), "3/2");
}

#[test]
fn exit_codes() {
    assert_eq!(regfam(&["iota", "S[w+]"]).status.code(), Some(2));
    assert_eq!(regfam(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(regfam(&["norm", "T(3/2,S)", "[1:1]"]).status.code(), Some(1));
    assert_eq!(regfam(&["--bound", "2", "search-sum", "A(3)", "even(maxF)"]).status.code(), Some(3));
}

#[test]
fn records_mode() {
    let o = regfam(&["--mode", "records", "iota", "S[2]"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["verb"], "iota");
    assert_eq!(v["input"], "iota S[2]");
    assert_eq!(v["value"], "w^2");
}

#[test]
fn batch_reports_worst_exit_code() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_regfam"))
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"# comment\niota A(3)\n\nmember S {2,3\niota FS[w]\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), ["3", "w"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
}
