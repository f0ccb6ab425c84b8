use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn opmos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opmos")).args(args).output().expect("binary runs")
}

fn write_diamond(dir: &Path) -> PathBuf {
    let p = dir.join("diamond.mog");
    fs::write(
        &p,
        "MOG 1\nnodes 4 edges 4 objectives 2\nsource 0 goal 3\n\
         edge 0 1 1 3\nedge 0 2 3 1\nedge 1 3 1 1\nedge 2 3 1 1\n",
    )
    .unwrap();
    p
}

fn gen(dir: &Path, name: &str, extra: &[&str]) -> PathBuf {
    let p = dir.join(name);
    let mut args = vec!["gen", "--out", p.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = opmos(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    p
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn run_echoes_sequential_algo() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_diamond(dir.path());
    let out = opmos(&["run", "--graph", g.to_str().unwrap(), "--algo", "seq", "--emit-paths"]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["algo"], "seq");
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["front"][0]["cost"], serde_json::json!([2.0, 4.0]));
    assert_eq!(report["front"][0]["path"], serde_json::json!([0, 1, 3]));
    assert!(report["stats"]["time_total"].is_u64());
}

#[test]
fn run_reports_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_diamond(dir.path());
    let out = opmos(&["run", "--graph", g.to_str().unwrap(), "--algo", "opmos", "--threads", "9", "--num-pop", "8"]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["workers"], 8);
    assert_eq!(report["config"]["num_pop"], 8);
    assert!(report["front"][0].get("path").is_none());
}

#[test]
fn run_check_against_sequential() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_diamond(dir.path());
    let stats = dir.path().join("stats.json");
    let trace = dir.path().join("trace.json");
    let out = opmos(&[
        "run",
        "--graph",
        g.to_str().unwrap(),
        "--algo",
        "opmos",
        "--check-against",
        "seq",
        "--stats",
        stats.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fronts equal"));
    let s: Value = serde_json::from_str(&fs::read_to_string(stats).unwrap()).unwrap();
    assert_eq!(s["front_size"], 2);
    let t: Value = serde_json::from_str(&fs::read_to_string(trace).unwrap()).unwrap();
    assert!(!t.as_array().unwrap().is_empty());
    assert!(t[0]["worst_worker"].is_u64());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_diamond(dir.path());
    let g = g.to_str().unwrap();
    assert_eq!(opmos(&["run", "--graph", g, "--exec", "bogus"]).status.code(), Some(2));
    assert_eq!(opmos(&["run", "--graph", g, "--threads", "1"]).status.code(), Some(2));
    assert_eq!(opmos(&["run"]).status.code(), Some(2));
    let missing = dir.path().join("missing.mog");
    assert_eq!(opmos(&["run", "--graph", missing.to_str().unwrap()]).status.code(), Some(1));
    let bad = dir.path().join("bad.mog");
    fs::write(&bad, "MOG 1\nnodes 2 edges 1 objectives 1\nsource 0 goal 1\nedge 0 1 -1.0\n").unwrap();
    let out = opmos(&["run", "--graph", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("negative cost"));
}

#[test]
fn gen_is_deterministic_and_loadable() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--nodes", "100", "--degree", "8", "--objectives", "6", "--seed", "7"];
    let a = gen(dir.path(), "a.mog", &args);
    let b = gen(dir.path(), "b.mog", &args);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let out = opmos(&["run", "--graph", a.to_str().unwrap(), "--algo", "seq"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let h = gen(dir.path(), "h.mog", &["--nodes", "30", "--with-heuristic", "--topology", "grid"]);
    assert!(fs::read_to_string(h).unwrap().lines().any(|l| l.starts_with("h ")));
}

#[test]
fn gen_rejects_zero_objectives_and_infeasible_params() {
    assert_eq!(opmos(&["gen", "--objectives", "0"]).status.code(), Some(2));
    let out = opmos(&["gen", "--nodes", "5", "--degree", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_rows_share_front_hash() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "g.mog", &["--nodes", "80", "--objectives", "3", "--correlation", "-0.5", "--seed", "2"]);
    let g = g.to_str().unwrap();

    let out = opmos(&["sweep", "--graph", g, "--queue", "pq,fifo"]);
    assert!(out.status.success());
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 3);
    let hash_col = rows[0].iter().position(|c| c == "front_hash").unwrap();
    assert_eq!(rows[1][hash_col], rows[2][hash_col]);
    assert!(rows.iter().all(|r| r.len() == rows[0].len()));

    let out = opmos(&["sweep", "--graph", g, "--threads", "2,3,5", "--reps", "2", "--algo", "seq,opmos"]);
    assert!(out.status.success());
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 1 + 2 + 3 * 2);
    assert!(rows[1..].iter().all(|r| r[hash_col] == rows[1][hash_col]));
}

#[test]
fn empty_sweep_list_gives_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_diamond(dir.path());
    let out = opmos(&["sweep", "--graph", g.to_str().unwrap(), "--threads"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("algo,threads"));
}

#[test]
fn check_passes_on_diamond_and_random_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_diamond(dir.path());
    let out = opmos(&["check", "--graph", g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS"));

    let out = opmos(&["check", "--random", "100", "--seed", "11", "--threads", "3,5", "--num-pop", "1,4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().filter(|l| l.starts_with("PASS")).count(), 100);
}

#[test]
fn check_detects_corrupted_front() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_diamond(dir.path());
    let out = opmos(&["check", "--graph", g.to_str().unwrap(), "--corrupt-front"]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAIL") && text.contains("only_in_b=[[4.0, 2.0]]"), "{text}");

    let out = opmos(&["check", "--graph", g.to_str().unwrap(), "--corrupt-front", "--skip-oracle"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn check_guards_oracle_size() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "big.mog", &["--nodes", "40"]);
    let out = opmos(&["check", "--graph", g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("oracle limit"));
    let out = opmos(&["check", "--graph", g.to_str().unwrap(), "--skip-oracle", "--threads", "3", "--num-pop", "4"]);
    assert_eq!(out.status.code(), Some(0));
}
