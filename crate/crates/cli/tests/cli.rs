use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn xbary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xbary")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = xbary(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    let out = xbary(args);
    if !out.status.success() {
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    }
    out.status.code().unwrap()
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(TempDir::new().unwrap())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn s(&self, name: &str) -> String {
        self.path(name).to_str().unwrap().to_string()
    }
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn solve(dir: &Dir, input: &str, output: &str, extra: &[&str]) -> Value {
    let (input, out) = (dir.s(input), dir.s(output));
    let mut args = vec!["solve", "--input", &input, "--output", &out];
    args.extend_from_slice(extra);
    ok(&args);
    read_json(&dir.path(output))
}

#[test]
fn two_diracs_end_to_end() {
    let dir = Dir::new();
    ok(&["gen", "diracs", "--points", "0,0", "2,0", "--output", &dir.s("in.json")]);
    let sol = solve(&dir, "in.json", "sol.json", &["--svg", &dir.s("direct.svg")]);
    assert_eq!(sol["cost"], "1/1");
    assert_eq!(sol["certificate"]["gap"], "0/1");
    assert_eq!(sol["barycenter"]["atoms"], serde_json::json!([["1/1", "0/1"]]));
    assert_eq!(sol["barycenter"]["masses"], serde_json::json!(["1/1"]));

    ok(&["render", "--input", &dir.s("in.json"), "--solution", &dir.s("sol.json"), "--out", &dir.s("out.svg")]);
    let svg = std::fs::read_to_string(dir.path("out.svg")).unwrap();
    assert_eq!(svg.matches(r#"class="barycenter""#).count(), 1);
    assert_eq!(svg, std::fs::read_to_string(dir.path("direct.svg")).unwrap());

    let verdict = ok(&["verify", "certificate", "--input", &dir.s("in.json"), "--solution", &dir.s("sol.json")]);
    assert!(verdict.starts_with("pass"));
}

#[test]
fn single_measure_is_its_own_barycenter() {
    let dir = Dir::new();
    let inst = r#"{"dimension": 2, "weights": ["1"],
        "measures": [{"atoms": [["0", "0"], ["1/2", "3"]], "masses": ["1/4", "0.75"]}]}"#;
    std::fs::write(dir.path("in.json"), inst).unwrap();
    let sol = solve(&dir, "in.json", "sol.json", &[]);
    assert_eq!(sol["cost"], "0/1");
    assert_eq!(sol["barycenter"]["atoms"], serde_json::json!([["0/1", "0/1"], ["1/2", "3/1"]]));
    assert_eq!(sol["barycenter"]["masses"], serde_json::json!(["1/4", "3/4"]));
}

#[test]
fn solve_matches_the_dense_lp() {
    let dir = Dir::new();
    for seed in ["1", "2", "3"] {
        ok(&["gen", "random", "--n", "3", "--k", "3", "--seed", seed, "--denominator", "16", "--output", &dir.s("in.json")]);
        let brute = ok(&["verify", "brute-mot", "--input", &dir.s("in.json")]);
        for extra in [&[][..], &["--oracle", "bruteforce"], &["--cells", "arrangement", "--lp", "exact", "--sequential"]] {
            let sol = solve(&dir, "in.json", "sol.json", extra);
            assert_eq!(sol["cost"], brute.trim());
            let support = sol["stats"]["support_size"].as_u64().unwrap();
            assert!(support <= 7);
        }
    }
}

#[test]
fn approx_stays_within_eps() {
    let dir = Dir::new();
    ok(&["gen", "random", "--n", "3", "--k", "2", "--seed", "5", "--denominator", "7", "--output", &dir.s("in.json")]);
    let exact = solve(&dir, "in.json", "exact.json", &[]);
    let out = dir.s("approx.json");
    ok(&["approx", "--input", &dir.s("in.json"), "--output", &out, "--eps", "1/100"]);
    let approx = read_json(&dir.path("approx.json"));
    assert_eq!(approx["stats"]["quantization"]["eps"], "1/100");
    let gap = approx["cost_approx"].as_f64().unwrap() - exact["cost_approx"].as_f64().unwrap();
    assert!((0.0..=0.01).contains(&gap), "gap {gap}");
}

#[test]
fn approx_on_the_grid_reproduces_solve() {
    let dir = Dir::new();
    ok(&["gen", "diracs", "--points", "0,0", "2,0", "--output", &dir.s("in.json")]);
    let exact = solve(&dir, "in.json", "exact.json", &[]);
    ok(&["approx", "--input", &dir.s("in.json"), "--output", &dir.s("approx.json"), "--eps", "1/100"]);
    let approx = read_json(&dir.path("approx.json"));
    assert_eq!(approx["cost"], exact["cost"]);
    assert_eq!(approx["barycenter"], exact["barycenter"]);
}

#[test]
fn exit_codes() {
    let dir = Dir::new();
    ok(&["gen", "diracs", "--points", "0,0", "2,0", "--output", &dir.s("in.json")]);
    let approx = |eps: &str| code(&["approx", "--input", &dir.s("in.json"), "--output", &dir.s("o.json"), "--eps", eps]);
    assert_eq!(approx("0"), 2);
    assert_eq!(approx("-1/2"), 2);
    assert_eq!(approx("abc"), 2);
    assert_eq!(code(&["solve", "--input", &dir.s("in.json")]), 2);
    assert_eq!(code(&["frobnicate"]), 2);

    std::fs::write(dir.path("bad.json"), "{ not json").unwrap();
    assert_eq!(code(&["solve", "--input", &dir.s("bad.json"), "--output", &dir.s("o.json")]), 1);
    let unbalanced = r#"{"dimension": 2, "weights": ["1/2", "1/2"],
        "measures": [{"atoms": [["0", "0"]], "masses": ["1"]}, {"atoms": [["1", "0"]], "masses": ["1/2"]}]}"#;
    std::fs::write(dir.path("unbalanced.json"), unbalanced).unwrap();
    assert_eq!(code(&["solve", "--input", &dir.s("unbalanced.json"), "--output", &dir.s("o.json")]), 1);
    assert_eq!(code(&["solve", "--input", &dir.s("missing.json"), "--output", &dir.s("o.json")]), 1);

    ok(&["gen", "random", "--n", "5", "--k", "3", "--seed", "1", "--output", &dir.s("big.json")]);
    assert_eq!(code(&["verify", "brute-mot", "--input", &dir.s("big.json"), "--budget", "100"]), 2);
    assert_eq!(
        code(&["solve", "--input", &dir.s("big.json"), "--output", &dir.s("o.json"), "--oracle", "bruteforce", "--budget", "10"]),
        2
    );
    assert_eq!(code(&["gen", "random", "--n", "0", "--k", "1"]), 2);
}

#[test]
fn tampered_certificates_are_rejected() {
    let dir = Dir::new();
    ok(&["gen", "random", "--n", "3", "--k", "3", "--seed", "4", "--denominator", "8", "--output", &dir.s("in.json")]);
    let mut sol = solve(&dir, "in.json", "sol.json", &[]);
    let verify = |dir: &Dir| code(&["verify", "certificate", "--input", &dir.s("in.json"), "--solution", &dir.s("t.json")]);

    std::fs::write(dir.path("t.json"), sol.to_string()).unwrap();
    assert_eq!(verify(&dir), 0);
    sol["certificate"]["potentials"][0][0] = Value::from("100");
    std::fs::write(dir.path("t.json"), sol.to_string()).unwrap();
    assert_eq!(verify(&dir), 1);
}

#[test]
fn generators_are_deterministic() {
    let a = ok(&["gen", "random", "--n", "20", "--k", "10", "--seed", "42", "--denominator", "1000"]);
    let b = ok(&["gen", "random", "--n", "20", "--k", "10", "--seed", "42", "--denominator", "1000"]);
    assert_eq!(a, b);
    let inst: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(inst["measures"].as_array().unwrap().len(), 10);
    assert_eq!(inst["measures"][0]["atoms"].as_array().unwrap().len(), 20);

    let single: Value = serde_json::from_str(&ok(&["gen", "random", "--n", "1", "--k", "1"])).unwrap();
    assert_eq!(single["measures"][0]["masses"], serde_json::json!(["1/1"]));

    let images: Value = serde_json::from_str(&ok(&["gen", "ellipses", "--m", "12", "--k", "2", "--seed", "3"])).unwrap();
    assert_eq!(images["measures"].as_array().unwrap().len(), 2);
}

#[test]
fn render_draws_one_disk_per_atom() {
    let dir = Dir::new();
    ok(&["gen", "random", "--n", "4", "--k", "3", "--seed", "8", "--denominator", "10", "--output", &dir.s("in.json")]);
    let sol = solve(&dir, "in.json", "sol.json", &["--log", &dir.s("log.csv")]);
    ok(&["render", "--input", &dir.s("in.json"), "--solution", &dir.s("sol.json"), "--out", &dir.s("out.svg")]);
    let svg = std::fs::read_to_string(dir.path("out.svg")).unwrap();
    let support = sol["barycenter"]["masses"].as_array().unwrap().len();
    assert_eq!(svg.matches(r#"class="barycenter""#).count(), support);
    assert_eq!(svg.matches(r#"class="input""#).count(), 12);

    let log = std::fs::read_to_string(dir.path("log.csv")).unwrap();
    assert!(log.starts_with("iteration,columns,"));
    assert!(log.lines().count() >= 2);

    ok(&["gen", "diracs", "--points", "0,0", "--output", &dir.s("other.json")]);
    assert_eq!(code(&["render", "--input", &dir.s("other.json"), "--solution", &dir.s("sol.json"), "--out", &dir.s("x.svg")]), 1);
}

#[test]
fn bench_table() {
    let table = ok(&["bench", "--n", "3", "--k", "3", "--seeds", "1,2,3", "--denominator", "10"]);
    let mut rows = csv::Reader::from_reader(table.as_bytes());
    let headers = rows.headers().unwrap().clone();
    let cert = headers.iter().position(|h| h == "certificate").unwrap();
    let records: Vec<_> = rows.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 3);
    assert!(records.iter().all(|r| &r[cert] == "pass"));

    let empty = ok(&["bench", "--n", "3", "--k", "3", "--seeds", ""]);
    assert_eq!(empty.lines().count(), 1);
}

#[test]
fn coverage_check() {
    let dir = Dir::new();
    ok(&["gen", "random", "--n", "4", "--k", "3", "--seed", "2", "--denominator", "5", "--output", &dir.s("in.json")]);
    solve(&dir, "in.json", "sol.json", &[]);
    let out = ok(&["verify", "coverage", "--input", &dir.s("in.json"), "--samples", "2000"]);
    assert!(out.starts_with("pass"));
    let out = ok(&["verify", "coverage", "--input", &dir.s("in.json"), "--solution", &dir.s("sol.json"), "--samples", "2000"]);
    assert!(out.starts_with("pass"));
}
