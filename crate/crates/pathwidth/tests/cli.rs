//! End-to-end CLI behaviour through `run_args`, plus a few runs of the real
//! binary for stdin and exit-code plumbing.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use pathwidth::cli::{run_args, Outcome};
use pathwidth::formats::{parse_decomposition, parse_graph, write_graph};
use pathwidth_core::decomposition::validate;
use pathwidth_core::generate::{complete, gnp, path};
use pathwidth_core::oracle::vs_dp;
use pathwidth_core::{Graph, PathDecomposition};
use tempfile::TempDir;

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Files(TempDir::new().expect("temp dir"))
    }

    fn put(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, text).expect("write temp file");
        p
    }

    fn graph(&self, name: &str, g: &Graph) -> PathBuf {
        self.put(name, &write_graph(g))
    }
}

fn run(args: &[&str]) -> Outcome {
    run_args(std::iter::once("pathwidth").chain(args.iter().copied()))
}

fn s(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

#[test]
fn solve_path3() {
    let f = Files::new();
    let g = f.put("p3.gr", "p pw 3 2\n1 2\n2 3\n");
    let out = run(&["solve", s(&g)]);
    assert_eq!(out.code, 0, "{out:?}");
    let mut lines = out.stdout.lines();
    assert_eq!(lines.next(), Some("pathwidth 1"));
    let rest: String = out.stdout.lines().skip(1).map(|l| format!("{l}\n")).collect();
    let pd = parse_decomposition(&rest).unwrap();
    assert_eq!(pd.decomposition.width(), 1);
    validate(&pd.decomposition, &path(3)).unwrap();
}

#[test]
fn solve_k4_and_empty() {
    let f = Files::new();
    let k4 = f.graph("k4.gr", &complete(4));
    assert!(run(&["solve", s(&k4)]).stdout.starts_with("pathwidth 3\n"));
    let empty = f.put("e.gr", "p pw 0 0\n");
    let out = run(&["solve", s(&empty)]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "pathwidth -1\ns pd 0 0 -1\n");
}

#[test]
fn decide_triangle() {
    let f = Files::new();
    let k3 = f.graph("k3.gr", &complete(3));
    let no = run(&["decide", s(&k3), "--k", "1"]);
    assert_eq!((no.code, no.stdout.as_str()), (1, "no\n"));
    let yes = run(&["decide", s(&k3), "--k", "2"]);
    assert_eq!(yes.code, 0);
    assert!(yes.stdout.starts_with("yes\n"));
}

#[test]
fn reduce_path_one_bag() {
    let f = Files::new();
    let g = f.graph("p3.gr", &path(3));
    let pd = f.put("one.pd", "s pd 6 3 2\n+ 1\n+ 2\n+ 3\n- 1\n- 2\n- 3\n");
    let yes = run(&["reduce", s(&g), s(&pd), "--k", "1"]);
    assert_eq!(yes.code, 0, "{yes:?}");
    assert!(yes.stdout.starts_with("yes\n"));
    let no = run(&["reduce", s(&g), s(&pd), "--k", "0"]);
    assert_eq!((no.code, no.stdout.as_str()), (1, "no\n"));
    let decide = run(&["reduce", s(&g), s(&pd), "--k", "1", "--mode", "decide"]);
    assert_eq!((decide.code, decide.stdout.as_str()), (0, "yes\n"));
}

#[test]
fn reduce_rejects_an_uncovering_input() {
    let f = Files::new();
    let g = f.graph("p3.gr", &path(3));
    // 1 leaves before 2 arrives
    let pd = f.put("bad.pd", "s pd 6 3 1\n+ 1\n- 1\n+ 2\n+ 3\n- 2\n- 3\n");
    let out = run(&["reduce", s(&g), s(&pd), "--k", "1"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("edge 1 2 is not covered by any bag"), "{}", out.stderr);
}

#[test]
fn verify_reports() {
    let f = Files::new();
    let g = f.graph("p3.gr", &path(3));
    let bad = f.put("bad.pd", "s pd 6 3 1\n+ 1\n- 1\n+ 2\n+ 3\n- 2\n- 3\n");
    let out = run(&["verify", s(&g), s(&bad)]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("invalid"));
    assert!(out.stdout.contains("edge 1 2 is not covered by any bag"));
    let good = f.put("good.pd", "s pd 6 3 2\n+ 1\n+ 2\n+ 3\n- 1\n- 2\n- 3\n");
    let out = run(&["verify", s(&g), s(&good)]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "valid width 2\n"));
    let lying = f.put("lying.pd", "s pd 6 3 5\n+ 1\n+ 2\n+ 3\n- 1\n- 2\n- 3\n");
    let out = run(&["verify", s(&g), s(&lying)]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("warning: "));
}

#[test]
fn oracle_limits() {
    let f = Files::new();
    let big = f.graph("big.gr", &path(30));
    assert_eq!(run(&["oracle", s(&big)]).code, 3);
    let c5 = f.put("c5.gr", "p pw 5 5\n1 2\n2 3\n3 4\n4 5\n5 1\n");
    let out = run(&["oracle", s(&c5)]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("pathwidth 2\n"), "{}", out.stdout);
}

#[test]
fn gen_is_deterministic() {
    let args = ["gen", "--family", "gnp", "-n", "20", "-p", "0.3", "--seed", "7"];
    let a = run(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a, run(&args));
    assert_eq!(parse_graph(&a.stdout).unwrap(), gnp(20, 0.3, 7));
    let grid = run(&["gen", "--family", "grid", "-r", "3", "-c", "3"]);
    assert!(grid.stdout.starts_with("p pw 9 12\n"));
}

#[test]
fn malformed_inputs_exit_2() {
    let f = Files::new();
    let ok = f.graph("ok.gr", &path(3));
    let pd = f.put("one.pd", "s pd 6 3 2\n+ 1\n+ 2\n+ 3\n- 1\n- 2\n- 3\n");
    let cases = [
        ("nohead.gr", "1 2\n"),
        ("range.gr", "p pw 3 1\n1 4\n"),
        ("loop.gr", "p pw 3 1\n2 2\n"),
        ("count.gr", "p pw 3 2\n1 2\n"),
        ("junk.gr", "p pw 3 1\n1 x\n"),
    ];
    for (name, text) in cases {
        let g = f.put(name, text);
        for args in [vec!["solve", s(&g)], vec!["oracle", s(&g)], vec!["reduce", s(&g), s(&pd), "--k", "1"]] {
            let out = run(&args);
            assert_eq!(out.code, 2, "{name} {args:?}: {out:?}");
            assert!(out.stderr.contains("line"), "{name}: {}", out.stderr);
        }
    }
    let missing = f.0.path().join("missing.gr");
    assert_eq!(run(&["solve", s(&missing)]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["decide", s(&ok)]).code, 2);
    let short = f.put("short.pd", "s pd 6 3 2\n+ 1\n");
    assert_eq!(run(&["verify", s(&ok), s(&short)]).code, 2);
    let other_n = f.put("n4.pd", &pathwidth::formats::write_decomposition(&PathDecomposition::one_bag(4), 4));
    assert_eq!(run(&["verify", s(&ok), s(&other_n)]).code, 2);
    assert_eq!(run(&["--threads", "0", "solve", s(&ok)]).code, 2);
}

#[test]
fn json_outputs_parse() {
    let f = Files::new();
    let g = f.graph("g.gr", &gnp(9, 0.4, 3));
    for args in [vec!["--json", "solve", s(&g), "--trace"], vec!["--json", "oracle", s(&g)]] {
        let out = run(&args);
        assert_eq!(out.code, 0);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).expect("json");
        assert!(v.is_object());
    }
}

#[test]
fn solve_agrees_with_the_oracle() {
    let f = Files::new();
    for seed in 0..30u64 {
        let g = gnp(4 + (seed as usize % 9), [0.2, 0.4, 0.6][seed as usize % 3], seed);
        let file = f.graph("g.gr", &g);
        for base in ["2", "16"] {
            let out = run(&["solve", s(&file), "--base-size", base]);
            assert_eq!(out.code, 0);
            let (first, rest) = out.stdout.split_once('\n').unwrap();
            assert_eq!(first, format!("pathwidth {}", vs_dp(&g).unwrap()));
            let pd = f.put("w.pd", rest);
            let check = run(&["verify", s(&file), s(&pd)]);
            assert_eq!(check.code, 0, "{check:?}");
        }
    }
}

#[test]
fn binary_reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pathwidth"))
        .args(["solve", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("spawn binary");
    child.stdin.take().unwrap().write_all(write_graph(&complete(4)).as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("pathwidth 3\n"));

    let k3 = Files::new();
    let g = k3.graph("k3.gr", &complete(3));
    let status = Command::new(env!("CARGO_BIN_EXE_pathwidth")).args(["decide", s(&g), "--k", "1"]).output().unwrap().status;
    assert_eq!(status.code(), Some(1));
}
