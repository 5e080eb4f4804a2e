use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const TRIANGLE: &str = r#"{"version":1,"vertices":[{"id":0,"breakable":true},{"id":1,"breakable":false},{"id":2,"breakable":false}],"edges":[[0,1],[1,2],[2,0]]}"#;
const CYCLE: &str = r#"{"version":1,"vertices":[{"id":0,"breakable":false},{"id":1,"breakable":false},{"id":2,"breakable":false}],"edges":[[0,1],[1,2],[2,0]]}"#;

fn trvb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trvb")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_triangle_yes_with_one_break() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "tri.json", TRIANGLE);
    let out = trvb(&["solve", s(&f)]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["answer"], true);
    assert_eq!(v["certificate"], serde_json::json!([0]));
}

#[test]
fn solve_no_instance_exits_one() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "cycle.json", CYCLE);
    let out = trvb(&["solve", s(&f)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("\"certificate\": null"));
}

#[test]
fn oracle_and_pruning_flags_agree() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "tri.json", TRIANGLE);
    let base = stdout(&trvb(&["solve", s(&f)]));
    for flags in [&["--oracle"][..], &["--no-budget", "--no-adjacency", "--no-cycle"]] {
        let mut args = vec!["solve", s(&f)];
        args.extend_from_slice(flags);
        assert_eq!(stdout(&trvb(&args)), base);
    }
}

#[test]
fn verify_empty_certificate_on_cycle_is_rejected() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "cycle.json", CYCLE);
    let c = write(&dir, "cert.json", "[]");
    let out = trvb(&["verify", s(&g), s(&c)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("not a tree"));
    let t = write(&dir, "tri.json", TRIANGLE);
    let ok = write(&dir, "ok.json", "[0]");
    assert_eq!(trvb(&["verify", s(&t), s(&ok)]).status.code(), Some(0));
}

#[test]
fn classify_prints_class_and_reason() {
    let out = trvb(&["classify", "--B", "4", "--U", "4", "--planar"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("NP-complete"));
    assert!(text.contains("reason: "));
    let no = stdout(&trvb(&["classify", "--B", "6+", "--U", "5+", "--planar", "--simple"]));
    assert!(no.contains("P_always_no"));
}

#[test]
fn parse_errors_exit_two_with_field_path() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.json", r#"{"version":1,"vertices":[{"id":0,"breakable":true}],"edges":[[0,9]]}"#);
    let out = trvb(&["solve", s(&f)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("edges[0][1]"));
    let iso = write(&dir, "iso.json", r#"{"version":1,"vertices":[{"id":0,"breakable":true}],"edges":[]}"#);
    assert_eq!(trvb(&["solve", s(&iso)]).status.code(), Some(2));
}

#[test]
fn guard_violations_exit_three() {
    let out = trvb(&["gadget", "verify", "u2_from_bk", "--k", "5", "--guard", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "tri.json", TRIANGLE);
    assert_eq!(trvb(&["solve", s(&f), "--max-breakable", "0"]).status.code(), Some(3));
}

#[test]
fn gadget_commands() {
    assert!(stdout(&trvb(&["gadget", "list"])).contains("u2_from_b5"));
    let ok = trvb(&["gadget", "verify", "u4_from_b4"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("certified"));
    assert_eq!(trvb(&["gadget", "verify", "u2_from_b5"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("g.json");
    assert_eq!(trvb(&["gadget", "export", "u2_from_b3", "-o", s(&f)]).status.code(), Some(0));
    assert_eq!(trvb(&["gadget", "check", s(&f)]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = trvb(&["generate", "multigraph", "--seed", "17", "-o", s(p)]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(stdout(&trvb(&["solve", s(&a)])), stdout(&trvb(&["solve", s(&a)])));
}

#[test]
fn export_then_import_is_identity() {
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("ico.json");
    trvb(&["generate", "icosahedron", "-o", s(&f)]);
    let copy = trvb(&["reduce", "insert-deg2", s(&f), "--per-edge", "0"]);
    assert_eq!(copy.stdout, std::fs::read(&f).unwrap());
}

#[test]
fn ham_reduction_preserves_answer() {
    let dir = TempDir::new().unwrap();
    for seed in ["1", "2", "3"] {
        let d = dir.path().join(format!("d{seed}.json"));
        let r = dir.path().join(format!("r{seed}.json"));
        trvb(&["generate", "digraph", "--vertices", "4", "--seed", seed, "-o", s(&d)]);
        let ham = trvb(&["ham", s(&d)]).status.code();
        assert_eq!(trvb(&["reduce", "ham-to-trvb", s(&d), "--k", "4", "-o", s(&r)]).status.code(), Some(0));
        assert_eq!(trvb(&["solve", s(&r)]).status.code(), ham);
    }
}

#[test]
fn hypergraph_conversions() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "h.json", r#"{"vertices":[0,1,2],"edges":[[0,1],[1,2]]}"#);
    let g = dir.path().join("g.json");
    assert_eq!(trvb(&["convert", "hst-to-trvb", s(&h), "-o", s(&g)]).status.code(), Some(0));
    assert_eq!(trvb(&["solve", s(&g)]).status.code(), Some(0));
    let t = write(&dir, "tri.json", TRIANGLE);
    let back = stdout(&trvb(&["convert", "trvb-to-hst", s(&t)]));
    assert!(back.contains("\"edges\""));
    let rep = write(&dir, "rep.json", r#"{"vertices":[0,1],"edges":[[0,0]]}"#);
    assert_eq!(trvb(&["convert", "hst-to-trvb", s(&rep)]).status.code(), Some(2));
}

#[test]
fn score_and_dot() {
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("ico.json");
    trvb(&["generate", "icosahedron", "-o", s(&f)]);
    assert!(stdout(&trvb(&["score", s(&f)])).contains("total 0"));
    let dot = stdout(&trvb(&["export-dot", s(&f)]));
    assert!(dot.starts_with("graph trvb {"));
    assert_eq!(dot.matches("style=filled").count(), 12);
}

#[test]
fn validate_reports_violations() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "tri.json", TRIANGLE);
    let out = trvb(&["validate", s(&f), "--B", "4", "--U", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("violation"));
    assert_eq!(trvb(&["validate", s(&f), "--B", "2", "--U", "2"]).status.code(), Some(0));
}
