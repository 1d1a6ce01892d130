use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use densub_core::io::write_edge_list;
use densub_core::oracles::count_copies_reference;
use densub_core::{build_caterpillar, Graph, OracleBudget};
use serde_json::Value;
use tempfile::TempDir;

fn densub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_densub")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn record(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(text.lines().next().expect("one line")).expect("json line")
}

fn graph_file(dir: &TempDir, name: &str, g: &Graph) -> PathBuf {
    let path = dir.path().join(name);
    write_edge_list(&path, g, None).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn extract_clique_and_cycle() {
    let dir = TempDir::new().unwrap();
    let k10 = graph_file(&dir, "k10.el", &Graph::complete(10));
    let out = densub(&["extract", "--s", "3", s(&k10)]);
    assert_eq!(code(&out), 0);
    let rec = record(&out);
    assert_eq!(rec["achieved"], true);
    assert_eq!(rec["witness_vertices"].as_array().unwrap().len(), 4);

    let c100 = graph_file(&dir, "c100.el", &Graph::cycle(100));
    let out = densub(&["extract", "--s", "3", s(&c100)]);
    assert_eq!(code(&out), 0);
    assert_eq!(record(&out)["achieved"], false);

    assert_eq!(code(&densub(&["extract", "--s", "2", s(&k10)])), 2);
    assert_eq!(code(&densub(&["extract", "--s", "3", "/nonexistent/g.el"])), 2);
}

#[test]
fn extract_min_degree() {
    let dir = TempDir::new().unwrap();
    let c6 = graph_file(&dir, "c6.el", &Graph::cycle(6));
    let rec = record(&densub(&["extract", "--min-degree", "--s", "2", s(&c6)]));
    assert_eq!(rec["achieved"], true);
    assert_eq!(rec["criterion"], "min-degree");
    assert_eq!(rec["min_degree"], 2);
}

#[test]
fn census_counts() {
    let dir = TempDir::new().unwrap();
    let p4 = graph_file(&dir, "p4.el", &Graph::path(4));
    let rec = record(&densub(&["census", "--a", "2", "--b", "3", s(&p4)]));
    assert_eq!(rec["exact_count"], 1);
    assert_eq!(rec["group_count"], 1);

    let k6 = Graph::complete(6);
    let path = graph_file(&dir, "k6.el", &k6);
    let rec = record(&densub(&["census", "--a", "2", "--b", "3", s(&path)]));
    let tree = build_caterpillar(2, 3).unwrap();
    let reference = count_copies_reference(&k6, &tree, &OracleBudget::default()).unwrap();
    assert_eq!(rec["exact_count"], reference);
    assert!(rec["upper_bound"].is_string());

    assert_eq!(code(&densub(&["census", "--a", "3", "--b", "2", s(&path)])), 2);
}

#[test]
fn generators() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("v.el");
    let out = densub(&["gen", "verstraete", "--n", "100", "--s", "3", "--t", "4", "--seed", "1", "--out", s(&out_path)]);
    assert_eq!(code(&out), 0);
    let rec = record(&out);
    assert_eq!(rec["diagnostics"]["certified"], true);
    assert_eq!(rec["prng"], "chacha8");
    let sidecar = dir.path().join("v.el.meta.json");
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(sidecar).unwrap()).unwrap();
    assert_eq!(meta, rec);
    assert!(densub_core::io::read_graph(&out_path).is_ok());

    let out = densub(&["gen", "feige", "--n", "40", "--d", "3", "--s", "3", "--cs", "0.1", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let meta: Value = serde_json::from_str(text.lines().next().unwrap().trim_start_matches("# ")).unwrap();
    assert_eq!(meta["diagnostics"]["size_bound"], 0);
    assert_eq!(meta["diagnostics"]["certified"], true);
    assert!(densub_core::io::parse_edge_list(&text).is_ok());

    assert_eq!(code(&densub(&["gen", "feige", "--d", "50", "--n", "40", "--s", "3"])), 2);
    // s above d is outside the generator's range
    assert_eq!(code(&densub(&["gen", "feige", "--n", "40", "--d", "3", "--s", "4", "--cs", "1", "--seed", "7"])), 2);
}

#[test]
fn identical_arguments_give_identical_output() {
    let args = ["gen", "feige", "--n", "30", "--d", "4", "--s", "3", "--seed", "11"];
    let (a, b) = (densub(&args), densub(&args));
    assert_eq!(a.stdout, b.stdout);

    let dir = TempDir::new().unwrap();
    let g = densub_core::constructions::gnp(80, 0.1, 3).unwrap();
    let path = graph_file(&dir, "g.el", &g);
    let args = ["extract", "--s", "5/2", "--seed", "4", s(&path)];
    assert_eq!(densub(&args).stdout, densub(&args).stdout);
}

#[test]
fn sparsity_and_budgets() {
    let dir = TempDir::new().unwrap();
    let k10 = graph_file(&dir, "k10.el", &Graph::complete(10));
    let rec = record(&densub(&["sparsity", "--rho", "1", "--r", "4", s(&k10)]));
    assert_eq!(rec["verdict"], "not-sparse");
    let rec = record(&densub(&["sparsity", "--rho", "5", "--r", "10", s(&k10)]));
    assert_eq!(rec["verdict"], "sparse");
    let out = densub(&["sparsity", "--rho", "1", "--r", "4", "--budget-subsets", "10", s(&k10)]);
    assert_eq!(code(&out), 3);
    let out = densub(&["sparsity", "--rho", "4", "--r", "5", "--heuristic", s(&k10)]);
    assert_eq!(record(&out)["method"], "heuristic");
}

#[test]
fn verify_records() {
    let dir = TempDir::new().unwrap();
    let k10 = graph_file(&dir, "k10.el", &Graph::complete(10));
    let out = densub(&["extract", "--s", "3", s(&k10)]);
    let rec_path = dir.path().join("rec.json");
    std::fs::write(&rec_path, &out.stdout).unwrap();
    let out = densub(&["verify", "--oracle", "--record", s(&rec_path), s(&k10)]);
    assert_eq!(code(&out), 0);
    assert_eq!(record(&out)["oracle_min_size"], 4);

    let mut tampered = record(&densub(&["extract", "--s", "3", s(&k10)]));
    tampered["witness_edges"] = 7.into();
    std::fs::write(&rec_path, tampered.to_string()).unwrap();
    let out = densub(&["verify", "--record", s(&rec_path), s(&k10)]);
    assert_eq!(code(&out), 1);
    assert_eq!(record(&out)["consistent"], false);
}

#[test]
fn sweep_rows_and_errors() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    std::fs::write(&cfg, "n = 500\nn = 1000\nn = 2000\nd = 8\nd = 16\ns = 3\nseed = 1..20\ncensus_limit = 20000\n").unwrap();
    let out = densub(&["sweep", s(&cfg)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# densub sweep csv v1"));
    assert!(lines.next().unwrap().starts_with("source,n,d,s,seed"));
    assert_eq!(lines.count(), 120);

    std::fs::write(&cfg, "n = 500\nd = 8\ns = 3\n").unwrap();
    assert_eq!(code(&densub(&["sweep", s(&cfg)])), 2);

    std::fs::write(&cfg, "graph = /nonexistent/missing.el\ns = 3\nseed = 1\n").unwrap();
    let out = densub(&["sweep", s(&cfg)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/missing.el"));

    let csv_out = densub(&["census", "--a", "2", "--b", "3", "--format", "csv", s(&cfg)]);
    assert_eq!(code(&csv_out), 2);
}
