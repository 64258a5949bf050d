//! End-to-end runs of the `tedsc` binary: generate, solve, validate.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn tedsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tedsc")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// The five-vertex DAG with pairs (a, e), (a, c), (b, e), routable as
/// `ade`, `ac`, `bce`.
fn gen_five_vertex_edp(dir: &TempDir) -> PathBuf {
    let inst = path(dir, "edp.tedsc");
    let out = tedsc(&[
        "gen", "edp", "--n", "5", "--edges", "0-3,3-4,0-2,1-2,2-4", "--pairs", "0-4,0-2,1-4", "--variant", "length",
        "-o", s(&inst),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    inst
}

#[test]
fn edp_pipeline() {
    let dir = TempDir::new().unwrap();
    let inst = gen_five_vertex_edp(&dir);
    let text = fs::read_to_string(&inst).unwrap();
    assert!(text.contains("param h 6\n"));
    assert_eq!(fs::read_to_string(path(&dir, "edp.truth")).unwrap(), "truth feasible\n");

    let walks = path(&dir, "edp.walks");
    let out = tedsc(&["solve", s(&inst), "--algo", "fpt-kh", "--schedule", s(&walks)]);
    assert_eq!((code(&out), stdout(&out).as_str()), (0, "YES\n"));
    let out = tedsc(&["validate", s(&inst), s(&walks)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));

    // the flow solver decides the same instance without the length bound
    let relaxed = path(&dir, "relaxed.tedsc");
    fs::write(&relaxed, text.replace("param h 6", "param h none").replace("variant length", "variant unconstrained"))
        .unwrap();
    let out = tedsc(&["solve", s(&relaxed), "--algo", "flow"]);
    assert_eq!((code(&out), stdout(&out).as_str()), (0, "YES\n"));
    // and refuses the bounded one as a usage error
    assert_eq!(code(&tedsc(&["solve", s(&inst), "--algo", "flow"])), 64);
}

#[test]
fn tampered_schedule_names_the_invariant() {
    let dir = TempDir::new().unwrap();
    let inst = gen_five_vertex_edp(&dir);
    let walks = path(&dir, "edp.walks");
    assert_eq!(code(&tedsc(&["solve", s(&inst), "--schedule", s(&walks)])), 0);
    let text = fs::read_to_string(&walks).unwrap();
    let fewer: Vec<&str> = text.lines().skip(1).collect();
    fs::write(&walks, fewer.join("\n")).unwrap();
    let out = tedsc(&["validate", s(&inst), s(&walks)]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("demand coverage"), "{}", stdout(&out));

    // two copies of one walk collide on every edge
    let first = text.lines().next().unwrap();
    fs::write(&walks, format!("{first}\n{first}\n")).unwrap();
    let out = tedsc(&["validate", s(&inst), s(&walks)]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("temporal edge disjointness"));
}

#[test]
fn bin_packing_file_has_fourteen_demands() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "bp.tedsc");
    let out = tedsc(&["gen", "binpack", "--sizes", "1,2,3", "--bins", "2", "--cap", "3", "-o", s(&inst)]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&inst).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("demand ")).count(), 14);
    let out = tedsc(&["solve", s(&inst), "--algo", "xp-k"]);
    assert_eq!((code(&out), stdout(&out).as_str()), (0, "YES\n"));
}

#[test]
fn sat_generation_writes_a_sidecar() {
    let dir = TempDir::new().unwrap();
    let cnf = path(&dir, "f.cnf");
    fs::write(&cnf, "p cnf 1 2\n1 0\n-1 0\n").unwrap();
    let inst = path(&dir, "f.tedsc");
    assert_eq!(code(&tedsc(&["gen", "sat", "--cnf", s(&cnf), "--variant", "lifespan", "-o", s(&inst)])), 0);
    assert_eq!(fs::read_to_string(path(&dir, "f.truth")).unwrap(), "truth infeasible\n");
    let out = tedsc(&["solve", s(&inst)]);
    assert_eq!((code(&out), stdout(&out).as_str()), (1, "NO\n"));
}

#[test]
fn oracle_over_caps_is_unknown() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "r.tedsc");
    let args = [
        "gen", "random", "--n", "4", "--m", "6", "--demands", "5", "--lambda", "40", "--k", "2", "--variant",
        "unconstrained", "--seed", "3", "-o", s(&inst),
    ];
    assert_eq!(code(&tedsc(&args)), 0);
    let out = tedsc(&["solve", s(&inst), "--algo", "oracle"]);
    assert_eq!((code(&out), stdout(&out).as_str()), (2, "UNKNOWN\n"));
    assert!(stderr(&out).contains("cap"));
    let out = tedsc(&["oracle", s(&inst), "--max-span", "64", "--min-walks"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn budget_exhaustion_is_unknown() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "bp.tedsc");
    assert_eq!(code(&tedsc(&["gen", "binpack", "--sizes", "2,2,2", "--bins", "3", "--cap", "2", "-o", s(&inst)])), 0);
    let out = tedsc(&["solve", s(&inst), "--algo", "xp-k", "--budget", "1"]);
    assert_eq!((code(&out), stdout(&out).as_str()), (2, "UNKNOWN\n"));
}

#[test]
fn parse_errors_exit_64_with_position() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "bad.tedsc");
    fs::write(&inst, "TEDSC v1\nn 2\nedge 0 1\ndemand 0 2 1\n").unwrap();
    let out = tedsc(&["solve", s(&inst)]);
    assert_eq!(code(&out), 64);
    assert!(stderr(&out).contains("bad.tedsc:4:10:"), "{}", stderr(&out));
    assert_eq!(code(&tedsc(&["solve"])), 64);
    assert_eq!(code(&tedsc(&["solve", s(&path(&dir, "missing.tedsc"))])), 64);
}

#[test]
fn json_mirror_is_accepted() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "bp.json");
    let out = tedsc(&["gen", "binpack", "--sizes", "3,3", "--bins", "2", "--cap", "3", "--json", "-o", s(&inst)]);
    assert_eq!(code(&out), 0);
    assert!(fs::read_to_string(&inst).unwrap().trim_start().starts_with('{'));
    let out = tedsc(&["solve", s(&inst)]);
    assert_eq!((code(&out), stdout(&out).as_str()), (0, "YES\n"));
}

#[test]
fn approx_reports_its_probes() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "bp.tedsc");
    assert_eq!(code(&tedsc(&["gen", "binpack", "--sizes", "1,2,3", "--bins", "2", "--cap", "3", "-o", s(&inst)])), 0);
    let walks = path(&dir, "a.walks");
    let out = tedsc(&["approx", s(&inst), "--schedule", s(&walks)]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("probe k=2 cost=14 limit=14 accepted"), "{text}");
    let relaxed = fs::read_to_string(&inst).unwrap().replace("param k 2", "param k 3");
    fs::write(&inst, relaxed).unwrap();
    assert_eq!(code(&tedsc(&["validate", s(&inst), s(&walks)])), 0);
}

#[test]
fn bench_small_corpus_agrees() {
    let out = tedsc(&["bench", "--corpus", "small"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let table = stdout(&out);
    let rows: Vec<&str> = table.lines().skip(1).collect();
    assert_eq!(rows.len(), 4, "{table}");
    assert!(rows.iter().all(|r| r.split('\t').nth(5) == Some("100.00%")), "{table}");
    let out = tedsc(&["bench", "--corpus", "small", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["oracle_unknown"], 0);
}
