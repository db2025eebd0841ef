//! End-to-end tests of the binary: file parsing, result formats, exit
//! codes and generation determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_linkage"))
}

struct Workdir {
    dir: PathBuf,
}

impl Workdir {
    fn new(tag: &str) -> Workdir {
        let dir = std::env::temp_dir().join(format!("linkage-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Workdir { dir }
    }

    fn write(&self, name: &str, content: &str) -> PathBuf {
        let path = self.dir.join(name);
        std::fs::write(&path, content).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }
}

impl Drop for Workdir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.dir);
    }
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

const THREE_CYCLE: &str = "3\n0 1\n1 2\n2 0\n";

fn three_cycle_files(work: &Workdir, instance: &str) -> (PathBuf, PathBuf) {
    (
        work.write("g.txt", THREE_CYCLE),
        work.write("inst.txt", instance),
    )
}

fn run_solve(graph: &Path, inst: &Path, extra: &[&str]) -> Output {
    bin()
        .args(["solve", "--graph"])
        .arg(graph)
        .arg("--instance")
        .arg(inst)
        .args(extra)
        .output()
        .unwrap()
}

#[test]
fn solve_three_cycle_prints_key_quality() {
    let work = Workdir::new("solve");
    let (g, i) = three_cycle_files(&work, "1 1\n1 0\n");
    let out = run_solve(&g, &i, &[]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), "3\n");

    let out = run_solve(&g, &i, &["--witness"]);
    assert_eq!(stdout(&out), "3\nwitness 3\npath 1 2 0\n");
}

#[test]
fn solve_heuristic_exit_code_and_marker() {
    let work = Workdir::new("heuristic");
    let (g, i) = three_cycle_files(&work, "1 1\n1 0\n");
    let out = run_solve(&g, &i, &["--m", "1", "--c", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).starts_with("# heuristic m=1 c=0\n"));
}

#[test]
fn decide_and_bounded() {
    let work = Workdir::new("decide");
    let (g, i) = three_cycle_files(&work, "1 1\n1 0\n");
    let out = bin()
        .args(["decide", "--graph"])
        .arg(&g)
        .arg("--instance")
        .arg(&i)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "yes\n");

    for (bounds, expect) in [("2", "no\n"), ("3", "yes\n")] {
        let out = bin()
            .args(["bounded", "--graph"])
            .arg(&g)
            .arg("--instance")
            .arg(&i)
            .args(["--bounds", bounds])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout(&out), expect, "bounds {bounds}");
    }

    // Bounds can come from the instance file.
    let i2 = work.write("inst2.txt", "1 1\n1 0\nbounds 3\n");
    let out = bin()
        .args(["bounded", "--graph"])
        .arg(&g)
        .arg("--instance")
        .arg(&i2)
        .output()
        .unwrap();
    assert_eq!(stdout(&out), "yes\n");

    // Missing bounds is a usage failure.
    let out = bin()
        .args(["bounded", "--graph"])
        .arg(&g)
        .arg("--instance")
        .arg(&i)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_agrees_with_solve() {
    let work = Workdir::new("oracle");
    let (g, i) = three_cycle_files(&work, "1 1\n1 0\n");
    let solve = run_solve(&g, &i, &[]);
    let oracle = bin()
        .args(["oracle", "--graph"])
        .arg(&g)
        .arg("--instance")
        .arg(&i)
        .output()
        .unwrap();
    assert_eq!(oracle.status.code(), Some(0));
    assert_eq!(stdout(&oracle), stdout(&solve));
}

#[test]
fn parse_errors_exit_2_with_position() {
    let work = Workdir::new("parse");
    let g = work.write("bad.txt", "3\n0 x\n");
    let i = work.write("inst.txt", "1 1\n1 0\n");
    let out = run_solve(&g, &i, &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("line 2"), "missing position in: {err}");
    assert!(err.contains("column 3"), "missing position in: {err}");
}

#[test]
fn precondition_failure_exits_2() {
    let work = Workdir::new("precond");
    let g = work.write("g.txt", "2\n"); // two isolated vertices
    let i = work.write("inst.txt", "1 1\n0 1\n");
    let out = run_solve(&g, &i, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("path-dominant"));
}

#[test]
fn budget_exceeded_exits_4() {
    let work = Workdir::new("budget");
    let (g, i) = three_cycle_files(&work, "1 1\n1 0\n");
    let out = bin()
        .args(["oracle", "--graph"])
        .arg(&g)
        .arg("--instance")
        .arg(&i)
        .args(["--budget-vertices", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let work = Workdir::new("gen");
    for run in ["a", "b"] {
        let status = bin()
            .args(["gen", "--seed", "7", "--n", "6", "--k", "2", "--out"])
            .arg(work.path(run))
            .status()
            .unwrap();
        assert!(status.success());
    }
    let graph_a = std::fs::read(work.path("a.graph")).unwrap();
    let graph_b = std::fs::read(work.path("b.graph")).unwrap();
    assert_eq!(graph_a, graph_b);
    let inst_a = std::fs::read(work.path("a.inst")).unwrap();
    let inst_b = std::fs::read(work.path("b.inst")).unwrap();
    assert_eq!(inst_a, inst_b);

    // Round trip: the files re-parse and re-serialize identically, and the
    // generated instance is solvable end to end.
    let graph = linkage::Digraph::parse(&String::from_utf8(graph_a).unwrap()).unwrap();
    assert!(graph.is_tournament());
    let spec =
        linkage::InstanceSpec::parse(&String::from_utf8(inst_a.clone()).unwrap()).unwrap();
    assert_eq!(spec.to_text().into_bytes(), inst_a);
    let out = run_solve(&work.path("a.graph"), &work.path("a.inst"), &[]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

    // Different seeds give different graphs (with overwhelming likelihood).
    let status = bin()
        .args(["gen", "--seed", "8", "--n", "6", "--k", "2", "--out"])
        .arg(work.path("c"))
        .status()
        .unwrap();
    assert!(status.success());
    assert_ne!(std::fs::read(work.path("c.graph")).unwrap(), graph_b);
}

#[test]
fn gen_dominant_digraph_mode() {
    let work = Workdir::new("gen-dom");
    let status = bin()
        .args(["gen", "--seed", "3", "--n", "5", "--mode", "digraph", "--out"])
        .arg(work.path("d"))
        .status()
        .unwrap();
    assert!(status.success());
    let graph = linkage::Digraph::parse(
        &std::fs::read_to_string(work.path("d.graph")).unwrap(),
    )
    .unwrap();
    assert!(graph.is_d_path_dominant(1).unwrap());
}

#[test]
fn dump_tracker_output() {
    let work = Workdir::new("dump");
    let g = work.write("g.txt", "2\n0 1\n");
    let i = work.write("inst.txt", "1 1\n0 1\n");
    let out = bin()
        .args(["dump-tracker", "--graph"])
        .arg(&g)
        .arg("--instance")
        .arg(&i)
        .args(["--m", "1", "--c", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("tracker n=2 k=1 m=1 c=0\nrails 3\n"));
    assert!(text.contains("rail 0: members=(0) X={1} Y={}"));
    assert!(text.contains("s0 -> r1 [2]"));
    assert!(text.contains("r2 -> t0 [0]"));
}

#[test]
fn diagnose_reports_enumerations() {
    let work = Workdir::new("diagnose");
    let (g, i) = three_cycle_files(&work, "1 1\n1 0\n");
    let out = bin()
        .args(["diagnose", "--graph"])
        .arg(&g)
        .arg("--instance")
        .arg(&i)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("key qualities: 1"));
    assert!(text.contains("linkage quality [3]"));
    assert!(text.contains("enumeration: 1 2 0"));
    assert!(text.contains("bound check: ok"));
}

#[test]
fn outputs_are_identical_across_runs() {
    let work = Workdir::new("determinism");
    let (g, i) = three_cycle_files(&work, "1 1\n1 0\n");
    let a = run_solve(&g, &i, &["--witness"]);
    let b = run_solve(&g, &i, &["--witness"]);
    assert_eq!(a.stdout, b.stdout);
}
