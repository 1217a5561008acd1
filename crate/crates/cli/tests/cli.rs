use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphwalk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn g1() -> String {
    fixture("g1.json").display().to_string()
}

#[test]
fn mine_g1_finds_red_green() {
    let o = run(&["mine", "--graph", &g1(), "--engine", "scp", "--mode", "exact", "--max-len", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let reports: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(reports.len(), 4);
    for (len, r) in reports.iter().enumerate() {
        assert_eq!(r["length"], len);
        assert_eq!(r["exhausted"], true);
    }
    assert_eq!(reports[2]["programs"], serde_json::json!([["red", "green"]]));
}

#[test]
fn engines_agree_on_g1() {
    for engine in ["oracle", "stp"] {
        let o = run(&["mine", "-g", &g1(), "--engine", engine, "--max-len", "2", "--output", "text"]);
        assert_eq!(o.status.code(), Some(0), "{engine}");
        assert!(stdout(&o).contains("length 2: 1 program(s), complete"), "{engine}");
    }
}

#[test]
fn unreachable_target_exits_one() {
    let o = run(&["mine", "-g", &g1(), "--target", "s1"]);
    assert_eq!(o.status.code(), Some(1));
    for line in stdout(&o).lines() {
        let r: Value = serde_json::from_str(line).unwrap();
        assert_eq!(r["programs"], serde_json::json!([]));
    }
}

#[test]
fn input_errors_exit_two() {
    let o = run(&["mine", "--graph", "missing.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
    assert_eq!(run(&["mine", "-g", &g1(), "--source", "nowhere"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "-g", &g1(), "--colors", "purple"]).status.code(), Some(2));
}

#[test]
fn verify_expectations() {
    let ok = run(&["verify", "-g", &g1(), "--colors", "red,green", "--expect", "exact"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("verdict: exact"));
    assert!(stdout(&ok).contains("E1 = {a, b}"));
    let feasible = run(&["verify", "-g", &g1(), "--colors", "red,green", "--expect", "feasible"]);
    assert_eq!(feasible.status.code(), Some(0));
    let wrong = run(&["verify", "-g", &g1(), "--colors", "red,green", "--expect", "halt"]);
    assert_eq!(wrong.status.code(), Some(1));
}

#[test]
fn verify_reports_complete_halt() {
    let o = run(&["verify", "-g", &g1(), "--colors", "blue,green", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["verdict"], "halt");
    assert_eq!(v["halt_step"], 1);
    assert_eq!(v["trace"][0], serde_json::json!(["s1", "s2"]));
}

#[test]
fn verify_epsilon_with_equal_endpoints() {
    let o = run(&["verify", "-g", &g1(), "-s", "s1", "-t", "s1", "--colors", "", "--expect", "exact"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_program_files() {
    let dir = tempfile::tempdir().unwrap();
    let colours = dir.path().join("p.json");
    fs::write(&colours, r#"["red", "green"]"#).unwrap();
    let o = run(&["verify", "-g", &g1(), "--program", colours.to_str().unwrap(), "--expect", "exact"]);
    assert_eq!(o.status.code(), Some(0));

    let toset = dir.path().join("q.json");
    fs::write(
        &toset,
        r#"[{"atom": {"f": "color", "op": "=", "v": "red"}}, {"atom": {"f": "color", "op": "=", "v": "green"}}]"#,
    )
    .unwrap();
    let o = run(&["verify", "-g", &g1(), "--program", toset.to_str().unwrap(), "--expect", "exact"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let bad = dir.path().join("r.json");
    fs::write(&bad, r#"{"not": "a program"}"#).unwrap();
    assert_eq!(run(&["verify", "-g", &g1(), "--program", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn simulate_dot_marks_endpoint_sets() {
    let o = run(&["simulate", "-g", &g1(), "--colors", "red,green", "--output", "dot"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    let marked: Vec<&str> = dot
        .lines()
        .filter(|l| l.contains("xlabel=\"E1\""))
        .map(|l| l.trim().split(' ').next().unwrap())
        .collect();
    assert_eq!(marked, ["\"a\"", "\"b\""]);
}

#[test]
fn convert_subdivides_edges() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("multi.json");
    fs::write(
        &input,
        r#"{"schema": [{"name": "color", "kind": "categorical"}],
            "vertices": [{"id": "u", "features": {"color": "red"}}, {"id": "v", "features": {"color": "red"}}],
            "edges": [{"src": "u", "dst": "v", "features": {"color": "blue"}}]}"#,
    )
    .unwrap();
    let out = dir.path().join("simple.json");
    let o = run(&["convert", "-g", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 3);
    assert_eq!(v["edges"].as_array().unwrap().len(), 2);
}

#[test]
fn gen_is_deterministic_and_loadable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        assert_eq!(run(&["gen", "--seed", "7", "--out", p.to_str().unwrap()]).status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let other = stdout(&run(&["gen", "--seed", "8"]));
    assert_ne!(other.as_bytes(), fs::read(&a).unwrap());
    let o = run(&["mine", "-g", a.to_str().unwrap(), "--max-len", "2"]);
    assert!(matches!(o.status.code(), Some(0 | 1)));
}

#[test]
fn output_is_deterministic() {
    let args = ["mine", "-g", &g1(), "--engine", "stp", "--mode", "feasible", "--max-len", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
