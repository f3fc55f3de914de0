//! End-to-end runs of the `cutree` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cutree::generators::random_connected;
use cutree::io::write_graph;
use cutree::{brute_force_min_cut, WeightedGraph};
use serde_json::Value;
use tempfile::TempDir;

fn cutree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cutree"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

struct Scratch(TempDir);

impl Scratch {
    fn new() -> Self {
        Scratch(TempDir::new().unwrap())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn graph(&self, name: &str, g: &WeightedGraph) -> String {
        let p = self.path(name);
        fs::write(&p, write_graph(g)).unwrap();
        s(&p)
    }
}

fn s(p: &Path) -> String {
    p.to_str().unwrap().to_string()
}

#[test]
fn exact_builds_validate() {
    let dir = Scratch::new();
    let g = dir.graph("g.txt", &random_connected(9, 16, 30, 1).unwrap());
    for alg in ["gomory-hu", "gusfield", "expansion", "ultrametric"] {
        let tree = s(&dir.path(&format!("{alg}.tree")));
        let audit = s(&dir.path(&format!("{alg}.json")));
        let out = cutree(&["build", "--alg", alg, "--in", &g, "--out", &tree, "--seed", "3", "--audit-json", &audit]);
        assert_eq!(code(&out), 0, "{alg}: {}", String::from_utf8_lossy(&out.stderr));
        let audit: Value = serde_json::from_str(&fs::read_to_string(&audit).unwrap()).unwrap();
        assert_eq!(audit["n"], 9);
        let out = cutree(&["validate", "--in", &g, "--tree", &tree]);
        assert_eq!(code(&out), 0, "{alg}: {}", String::from_utf8_lossy(&out.stdout));
        assert_eq!(stdout_json(&out)["checked_pairs"], 36);
    }
}

#[test]
fn gomory_hu_audit_counts_queries() {
    let dir = Scratch::new();
    let g = dir.graph("g.txt", &random_connected(7, 10, 9, 2).unwrap());
    let audit = s(&dir.path("a.json"));
    let out = cutree(&["build", "--alg", "gomory-hu", "--in", &g, "--out", &s(&dir.path("t")), "--audit-json", &audit]);
    assert_eq!(code(&out), 0);
    let audit: Value = serde_json::from_str(&fs::read_to_string(&audit).unwrap()).unwrap();
    assert_eq!(audit["oracle"]["cut_queries"], 6);
}

#[test]
fn expansion_is_deterministic() {
    let dir = Scratch::new();
    let g = dir.graph("g.txt", &random_connected(30, 70, 50, 5).unwrap());
    let mut outputs = Vec::new();
    for run in 0..2 {
        let tree = dir.path(&format!("t{run}"));
        let audit = dir.path(&format!("a{run}"));
        let out = cutree(&["build", "--alg", "expansion", "--seed", "7", "--in", &g, "--out", &s(&tree), "--audit-json", &s(&audit)]);
        assert_eq!(code(&out), 0);
        outputs.push((fs::read(&tree).unwrap(), fs::read(&audit).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn approx_structure_stays_within_bounds() {
    let dir = Scratch::new();
    for seed in 0..4 {
        let g = dir.graph("g.txt", &random_connected(10, 20, 25, seed).unwrap());
        let ds = s(&dir.path("ds.json"));
        let tree = s(&dir.path("ap.tree"));
        let out = cutree(&[
            "build", "--alg", "approx", "--eps", "1/4", "--oracle", "noisy", "--seed", "11", "--in", &g, "--out", &tree,
            "--ds-out", &ds,
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let out = cutree(&["validate", "--in", &g, "--ds", &ds]);
        assert_eq!(code(&out), 0);
        let report = stdout_json(&out);
        assert_eq!(report["checked_pairs"], 45);
        assert!(report["max_ratio"].as_f64().unwrap() <= 1.5625);
        let out = cutree(&["validate", "--in", &g, "--tree", &tree, "--eps", "1/4"]);
        assert_eq!(code(&out), 0);
    }
}

#[test]
fn query_two_node_tree_gives_edge_weight() {
    let dir = Scratch::new();
    let g = dir.graph("g.txt", &WeightedGraph::from_u64_edges(2, &[(0, 1, 42)]).unwrap());
    let tree = s(&dir.path("t"));
    assert_eq!(code(&cutree(&["build", "--alg", "gusfield", "--in", &g, "--out", &tree])), 0);
    let out = cutree(&["query", "--tree", &tree, "2", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["value"], "42");
}

#[test]
fn query_edges_on_path_reports_lightest_edge() {
    let dir = Scratch::new();
    let g = dir.graph("g.txt", &WeightedGraph::from_u64_edges(4, &[(0, 1, 5), (1, 2, 2), (2, 3, 9)]).unwrap());
    let tree = s(&dir.path("t"));
    assert_eq!(code(&cutree(&["build", "--alg", "gomory-hu", "--in", &g, "--out", &tree])), 0);
    let out = cutree(&["query", "--mode", "edges", "--in", &g, "--tree", &tree, "1", "4"]);
    let a = stdout_json(&out);
    assert_eq!(a["value"], "2");
    let edges = a["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 1);
    assert_eq!((&edges[0]["u"], &edges[0]["v"]), (&Value::from(2), &Value::from(3)));
}

#[test]
fn reported_edges_match_brute_force() {
    let dir = Scratch::new();
    for seed in 0..3 {
        let graph = random_connected(11, 22, 20, 40 + seed).unwrap();
        let g = dir.graph("g.txt", &graph);
        let tree = s(&dir.path("t"));
        assert_eq!(code(&cutree(&["build", "--alg", "gomory-hu", "--in", &g, "--out", &tree])), 0);
        for (a, b) in [(1usize, 11usize), (3, 7), (2, 5)] {
            let out = cutree(&["query", "--mode", "edges", "--in", &g, "--tree", &tree, &a.to_string(), &b.to_string()]);
            let ans = stdout_json(&out);
            let opt = brute_force_min_cut(&graph, a - 1, b - 1).unwrap();
            assert_eq!(ans["value"], opt.value().to_string());
            let total: u64 = ans["edges"]
                .as_array()
                .unwrap()
                .iter()
                .map(|e| e["cap"].as_str().unwrap().parse::<u64>().unwrap())
                .sum();
            assert_eq!(total.to_string(), opt.value().to_string());
        }
    }
}

#[test]
fn corrupted_weight_fails_validation() {
    let dir = Scratch::new();
    let g = dir.graph("g.txt", &random_connected(6, 9, 10, 8).unwrap());
    let tree = dir.path("t");
    assert_eq!(code(&cutree(&["build", "--alg", "gusfield", "--in", &g, "--out", &s(&tree)])), 0);
    let text = fs::read_to_string(&tree).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let edge = lines.iter().position(|l| l.starts_with("t ")).unwrap();
    let mut tok: Vec<&str> = lines[edge].split(' ').collect();
    let (u, v) = (tok[1].to_string(), tok[2].to_string());
    tok[3] = "1000";
    lines[edge] = tok.join(" ");
    fs::write(&tree, lines.join("\n") + "\n").unwrap();
    let out = cutree(&["validate", "--in", &g, "--tree", &s(&tree)]);
    assert_eq!(code(&out), 1);
    let report = stdout_json(&out);
    let pairs: Vec<(String, String)> = report["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| (v["s"].to_string(), v["t"].to_string()))
        .collect();
    let (lo, hi) = if u.parse::<u32>().unwrap() < v.parse::<u32>().unwrap() { (u, v) } else { (v, u) };
    assert!(pairs.contains(&(lo, hi)), "{pairs:?}");
}

#[test]
fn usage_errors_exit_two() {
    let dir = Scratch::new();
    let g = dir.graph("g.txt", &random_connected(5, 6, 10, 1).unwrap());
    let tree = s(&dir.path("t"));
    assert_eq!(code(&cutree(&["build", "--alg", "expansion", "--in", &g, "--out", &tree])), 2);
    assert_eq!(code(&cutree(&["build", "--alg", "approx", "--eps", "x/4", "--in", &g, "--seed", "1"])), 2);
    assert_eq!(code(&cutree(&["build", "--alg", "gomory-hu", "--in", &s(&dir.path("missing"))])), 2);
    assert_eq!(code(&cutree(&["build", "--alg", "gomory-hu", "--in", &g, "--out", &tree])), 0);
    assert_eq!(code(&cutree(&["query", "--tree", &tree, "1", "6"])), 2);
    assert_eq!(code(&cutree(&["query", "--tree", &tree, "2", "2"])), 2);
    assert_eq!(code(&cutree(&["validate", "--in", &g, "--tree", &tree, "--pairs", "some"])), 2);
    fs::write(dir.path("bad.txt"), "p 2 1\ne 1 3 4\n").unwrap();
    let out = cutree(&["build", "--alg", "gusfield", "--in", &s(&dir.path("bad.txt"))]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn tree_from_another_graph_is_rejected() {
    let dir = Scratch::new();
    let g1 = dir.graph("g1.txt", &random_connected(6, 8, 10, 1).unwrap());
    let g2 = dir.graph("g2.txt", &random_connected(6, 8, 10, 2).unwrap());
    let tree = s(&dir.path("t"));
    assert_eq!(code(&cutree(&["build", "--alg", "gusfield", "--in", &g1, "--out", &tree])), 0);
    assert_eq!(code(&cutree(&["validate", "--in", &g2, "--tree", &tree])), 2);
}

#[test]
fn dimacs_input_is_accepted() {
    let dir = Scratch::new();
    let p = dir.path("g.dimacs");
    fs::write(&p, "c toy\np max 3 3\na 1 2 3\na 2 3 4\na 3 1 5\n").unwrap();
    let tree = s(&dir.path("t"));
    assert_eq!(code(&cutree(&["build", "--alg", "gomory-hu", "--in", &s(&p), "--out", &tree])), 0);
    let out = cutree(&["query", "--tree", &tree, "1", "2"]);
    assert_eq!(stdout_json(&out)["value"], "7");
}

#[test]
fn generate_is_seeded() {
    let a = cutree(&["generate", "--family", "grid", "--rows", "3", "--cols", "4", "--seed", "5"]);
    let b = cutree(&["generate", "--family", "grid", "--rows", "3", "--cols", "4", "--seed", "5"]);
    let c = cutree(&["generate", "--family", "grid", "--rows", "3", "--cols", "4", "--seed", "6"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).contains("p 12 17"));
}

#[test]
fn demo_shows_the_gap() {
    let out = cutree(&["demo", "approx-gh-failure"]);
    assert_eq!(code(&out), 0);
    let r = stdout_json(&out);
    assert_eq!(r["naive_exceeds"], true);
    assert_eq!(r["approx_within"], true);
}

#[test]
fn bench_reports_audits() {
    let out = cutree(&["bench", "--sizes", "20,40", "--seed", "2", "--queries", "200", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rows = stdout_json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2 * 6);
    for r in rows {
        if r["alg"] == "Expansion" {
            assert!(r["depth"].as_f64().unwrap() <= r["depth_limit"].as_f64().unwrap());
            assert!(r["cag_ratio"].as_f64().unwrap() <= 1.0);
        }
        if r["alg"] == "Ultrametric" || r["alg"] == "Approx" {
            assert!(r["queries_per_nlogn"].as_f64().unwrap() <= 64.0);
        }
        if r["alg"] == "query-ds" {
            assert!(r["visited_per_k_logn"].as_f64().unwrap() <= 8.0);
        }
    }
}
