//! End-to-end runs of the `tss-lab` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tss-lab")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tss-lab-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn f_and_id_are_related_on_closed_terms() {
    let o = run(&["lift", "--tss", "ex1", "--semantics", "ci", "f(x)", "id(x)"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("related"));
}

#[test]
fn f_and_id_are_separated_by_the_tau_chain() {
    let o = run(&["lift", "--tss", "ex1", "--semantics", "pg", "--family", "tauchain", "f(x)", "id(x)"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("unrelated"));
    assert!(out.contains("witness"));
    assert!(out.contains("s0 -tau-> s1, s1 -c-> s2"), "{out}");
}

#[test]
fn impure_specification_reports_its_variable() {
    let o = run(&["pure", "--tss", "cax.tss"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("not pure"));
    assert!(out.contains("unbound: x"), "{out}");
    assert_eq!(code(&run(&["pure", "--tss", "ex1"])), 0);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&run(&["frobnicate"])), 64);
    assert_eq!(code(&run(&["lift", "--tss", "ex1"])), 64);
    assert_eq!(code(&run(&["lift", "--tss", "ex1", "--semantics", "nope", "x", "x"])), 64);
}

#[test]
fn help_and_version_exit_0() {
    let o = run(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("Usage"));
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn missing_input_exits_66() {
    let o = run(&["pure", "--tss", "/definitely/not/here.tss"]);
    assert_eq!(code(&o), 66);
    assert!(stderr(&o).contains("cannot read"));
}

#[test]
fn malformed_input_exits_65() {
    let bad = temp_file("bad.tss", "tss bad\nactions: a\n");
    assert_eq!(code(&run(&["pure", "--tss", bad.to_str().unwrap()])), 65);
    let o = run(&["derive", "--tss", "ex1", "g(0)"]);
    assert_eq!(code(&o), 65, "{}", stderr(&o));
    let graphs = temp_file("bad.graphs", "graph g { states: s0; edges: ; }\n");
    assert_eq!(code(&run(&["minimize", "--graphs", graphs.to_str().unwrap(), "g"])), 65);
}

#[test]
fn user_files_are_read_from_disk() {
    let spec = temp_file("loop.tss", "tss loop\nactions: a;\nsig: l/0;\n|- l -a-> l\n");
    let o = run(&["lts", "--tss", spec.to_str().unwrap(), "l"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("l -a-> l"));
}

#[test]
fn not_adequate_exits_2() {
    let o = run(&["meaning", "--tss", "ex8-model2", "--semantics", "pg", "c"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("not adequate"));
}

#[test]
fn seeded_checks_are_reproducible() {
    let args = [
        "check",
        "--tss",
        "sec10-seq",
        "--semantics",
        "pg",
        "--eq",
        "weak",
        "--family",
        "ex10",
        "--requirement",
        "congruence",
        "--term",
        "seq(x, b)",
        "--seed",
        "5",
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 1);
    assert_eq!(code(&a), code(&b));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("FAIL"));
}

#[test]
fn json_output_parses() {
    let o = run(&["--json", "lift", "--tss", "ex1", "f(x)", "id(x)"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).expect("valid json");
    assert_eq!(v["verdict"], "related");
    assert!(v["coverage"]["instances"].as_u64().unwrap() >= 100);

    let o = run(&["--json", "pure", "--tss", "ex8-model1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).expect("valid json");
    assert_eq!(v["pure"], false);
}

#[test]
fn graph_commands() {
    let o = run(&["bisim", "--graphs", "ex10", "--eq", "weak", "rho", "nu"]);
    assert_eq!(code(&o), 0);
    let o = run(&["bisim", "--graphs", "ex10", "rho", "nu"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("witness"));
    let o = run(&["minimize", "--graphs", "ex10", "nu", "--eq", "weak"]);
    assert_eq!(code(&o), 0);
    assert!(!stdout(&o).contains("tau-> s1"));
    let o = run(&["export-dot", "--graphs", "tauchain"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("__start -> \"s0\""));
}

#[test]
fn specification_commands() {
    let o = run(&["derive", "--tss", "ex1", "f(a.b.0)"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("f(a.b.0) -a-> f(b.0)"));
    let o = run(&["stratify", "--tss", "sec10-seq"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("stratified"));
    let o = run(&["sum", "sec12-p0", "sec12-qtau"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("prefix_tau/1"));
    let o = run(&["export-dot", "--tss", "ex1", "f(a.0)"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("digraph"));
}
