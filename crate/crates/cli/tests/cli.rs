use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blowup-lab")).args(args).current_dir(dir).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn ok(dir: &Path, args: &[&str]) -> Value {
    let out = run(dir, args);
    assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    json(&out)
}

#[test]
fn random_generation_is_deterministic() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["gen", "random", "--n", "100", "--p", "0.5", "--seed", "7", "--out", "a.txt"]);
    ok(dir, &["gen", "random", "--n", "100", "--p", "0.5", "--seed", "7", "--out", "b.txt"]);
    ok(dir, &["gen", "random", "--n", "100", "--p", "0.5", "--seed", "8", "--out", "c.txt"]);
    let a = fs::read(dir.join("a.txt")).unwrap();
    assert_eq!(a, fs::read(dir.join("b.txt")).unwrap());
    assert_ne!(a, fs::read(dir.join("c.txt")).unwrap());
    assert!(String::from_utf8_lossy(&a).starts_with("#blowup-lab-graph v1 gnp(n=100,p=0.5,seed=7,rng=chacha8)\n"));

    let manifest: Value = serde_json::from_str(&fs::read_to_string(dir.join("a.txt.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "gen random");
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["rng"], "chacha8");
    assert_eq!(manifest["exit_code"], 0);
    assert_eq!(manifest["params"]["command"]["gen"]["kind"]["random"]["n"], 100);
    assert!(manifest["duration_secs"].as_f64().unwrap() >= 0.0);
}

#[test]
fn triangle_count_of_k4() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["gen", "multipartite", "--sizes", "1,1,1,1", "--out", "k4.txt"]);
    let report = ok(dir, &["count", "--shape", "1,1,1", "--in", "k4.txt", "--mode", "exact"]);
    assert_eq!(report["count"], "24");
    assert_eq!(report["density_num"], "3");
    assert_eq!(report["density_den"], "8");
    assert_eq!(report["mode"], "exact");
    assert!(dir.join("blowup-lab-count.manifest.json").exists());
}

#[test]
fn exact_over_budget_suggests_sampling() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["gen", "random", "--n", "200", "--p", "0.5", "--seed", "1", "--out", "g.txt"]);
    let out = run(dir, &["count", "--shape", "2,2,2", "--in", "g.txt", "--mode", "exact", "--budget", "1000"]);
    assert_eq!(code(&out), 3);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--mode sample"), "{err}");

    // auto mode falls back to sampling under the same budget
    let report = ok(dir, &["count", "--shape", "2,2,2", "--in", "g.txt", "--budget", "1000", "--samples", "20000"]);
    assert_eq!(report["mode"], "sample");
    assert_eq!(report["samples"], 20000);
}

#[test]
fn usage_errors_name_the_flag() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let out = run(dir, &["gen", "random", "--n", "5", "--p", "1.5", "--out", "x.txt"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--p"));

    let out = run(dir, &["gen", "random", "--p", "0.5", "--out", "x.txt"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--n"));

    let out = run(dir, &["count", "--shape", "1,0,1", "--in", "missing.txt"]);
    assert_eq!(code(&out), 2);

    ok(dir, &["gen", "multipartite", "--sizes", "2,2", "--out", "c4.txt"]);
    let out = run(dir, &["count", "--shape", "1,x,1", "--in", "c4.txt"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--shape"));

    let out = run(dir, &["scan", "--in", "c4.txt", "--delta", "1.5", "--out", "s.csv"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--delta"));
}

#[test]
fn malformed_graph_file_reports_line() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    fs::write(dir.join("bad.txt"), "#blowup-lab-graph v1\n4 2\n0 1\n3 3\n").unwrap();
    let out = run(dir, &["count", "--shape", "1,1,1", "--in", "bad.txt"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
}

#[test]
fn rs_generation_and_certificate_check() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let summary = ok(dir, &["gen", "rs", "--m", "50", "--out", "rs.txt"]);
    let s = summary["set_size"].as_u64().unwrap();
    assert_eq!(summary["n"], 300);
    assert_eq!(summary["m"], 150 * s);
    assert_eq!(summary["triangles"], 50 * s);
    for f in ["rs.txt", "rs.set.txt", "rs.cert.json", "rs.txt.manifest.json"] {
        assert!(dir.join(f).exists(), "{f}");
    }
    let report = ok(dir, &["verify", "rs", "--in", "rs.txt", "--cert", "rs.cert.json"]);
    assert_eq!(report["pass"], true);
    assert_eq!(report["triangles"], (50 * s).to_string());

    let report = ok(dir, &["verify", "rs", "--m", "20"]);
    assert_eq!(report["pass"], true);
    assert_eq!(
        report["expected_triangles"].as_u64().unwrap(),
        report["triangles"].as_str().unwrap().parse::<u64>().unwrap()
    );
}

#[test]
fn tampered_rs_graph_is_falsified() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["gen", "rs", "--m", "5", "--out", "rs.txt"]);
    let g = blowup_core::io::load_graph(dir.join("rs.txt")).unwrap();
    // two vertices of the first part are never adjacent in an RS graph
    let tampered = g.with_edge(0, 1).unwrap();
    blowup_core::io::save_graph(&tampered, dir.join("bad.txt")).unwrap();
    let out = run(dir, &["verify", "rs", "--in", "bad.txt", "--cert", "rs.cert.json"]);
    assert_eq!(code(&out), 4);
    let report = json(&out);
    assert_eq!(report["pass"], false);
    assert!(report["counterexample"].is_object());
    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(dir.join("blowup-lab-verify.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["exit_code"], 4);
}

#[test]
fn invariant_checks_pass() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let report = ok(dir, &["verify", "tensor", "--n", "10", "--p", "0.4", "--seed", "2", "--k", "2"]);
    assert_eq!(report["pass"], true);
    assert_eq!(report["tensor_n"], 100);
    ok(dir, &["gen", "random", "--n", "30", "--p", "0.6", "--seed", "3", "--out", "g.txt"]);
    assert_eq!(ok(dir, &["verify", "cs", "--in", "g.txt"])["pass"], true);
    assert_eq!(ok(dir, &["verify", "prop13-lower", "--in", "g.txt"])["pass"], true);
    let report = ok(dir, &["verify", "blowup-identity", "--n", "6", "--p", "0.7", "--seed", "4", "--q", "3"]);
    assert_eq!(report["pass"], true);
    assert_eq!(report["shapes"].as_array().unwrap().len(), 4);
}

#[test]
fn k4_cauchy_schwarz_equality() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["gen", "multipartite", "--sizes", "1,1,1,1", "--out", "k4.txt"]);
    let report = ok(dir, &["verify", "cs", "--in", "k4.txt"]);
    assert_eq!(report["lhs"], "576");
    assert_eq!(report["rhs"], "576");
    assert_eq!(report["equality"], true);
}

#[test]
fn k112_extremal_count_matches_closed_form() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let summary = ok(dir, &["gen", "k112-extremal", "--m", "5", "--q", "2", "--out", "ext.txt"]);
    let s = summary["set_size"].as_u64().unwrap();
    let report = ok(dir, &["count", "--shape", "1,1,2", "--in", "ext.txt", "--mode", "exact"]);
    assert_eq!(report["count"], (6 * 5 * s * 16).to_string());
    assert_eq!(summary["hom_k112"], report["count"]);
    let report = ok(dir, &["count", "--shape", "1,1,1", "--in", "ext.txt", "--mode", "exact"]);
    assert_eq!(report["count"], (6 * 5 * s * 8).to_string());
}

#[test]
fn blowup_and_tensor_generation() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["gen", "multipartite", "--sizes", "1,1,1", "--out", "k3.txt"]);
    let b = ok(dir, &["gen", "blowup", "--in", "k3.txt", "--q", "3", "--out", "b.txt"]);
    assert_eq!((b["n"].as_u64(), b["m"].as_u64()), (Some(9), Some(27)));
    let b = ok(dir, &["gen", "blowup", "--in", "k3.txt", "--sizes", "1,2,3", "--out", "b2.txt"]);
    assert_eq!((b["n"].as_u64(), b["m"].as_u64()), (Some(6), Some(11)));
    let t = ok(dir, &["gen", "tensor", "--in", "k3.txt", "--k", "2", "--out", "t.txt"]);
    assert_eq!((t["n"].as_u64(), t["m"].as_u64()), (Some(9), Some(18)));
    let report = ok(dir, &["count", "--shape", "1,1,1", "--in", "t.txt"]);
    assert_eq!(report["count"], "36");
    let out = run(dir, &["gen", "tensor", "--in", "k3.txt", "--k", "20", "--out", "big.txt"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn behrend_set_file() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let summary = ok(dir, &["gen", "behrend", "--n", "1000", "--out", "s.txt"]);
    let set = blowup_core::io::load_set(dir.join("s.txt")).unwrap();
    assert_eq!(summary["size"].as_u64().unwrap() as usize, set.len());
    assert!(blowup_core::constructions::is_3ap_free(set.elements()));
}

#[test]
fn scan_random_complete_and_triangle_free() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["gen", "random", "--n", "300", "--p", "0.5", "--seed", "5", "--out", "g.txt"]);
    let summary =
        ok(dir, &["scan", "--in", "g.txt", "--delta", "0.5", "--t-max", "4", "--seed", "5", "--out", "g.csv"]);
    assert_eq!(summary["status"], "satisfied");
    assert_eq!(summary["first_satisfying_t"], 2);
    let csv = fs::read_to_string(dir.join("g.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "# blowup-lab scan csv v1");
    assert_eq!(lines[1], "t,density_log2,half_width,threshold_log2,satisfied");
    assert_eq!(lines.len(), 5);
    assert!(dir.join("g.csv.manifest.json").exists());

    ok(dir, &["gen", "multipartite", "--sizes", &vec!["1"; 30].join(","), "--out", "k30.txt"]);
    let summary = ok(dir, &["scan", "--in", "k30.txt", "--out", "k30.csv"]);
    assert_eq!(summary["first_satisfying_t"], 2);
    assert!(summary["rows"][0]["density_log2"].as_f64().unwrap() > -1.0);

    ok(dir, &["gen", "multipartite", "--sizes", "4,4", "--out", "bip.txt"]);
    let summary = ok(dir, &["scan", "--in", "bip.txt", "--out", "bip.csv"]);
    assert_eq!(summary["status"], "vacuous");
    assert!(summary["first_satisfying_t"].is_null());
}

#[test]
fn sampling_ignores_worker_count() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["gen", "random", "--n", "80", "--p", "0.5", "--seed", "9", "--out", "g.txt"]);
    let args = ["count", "--shape", "2,2,2", "--in", "g.txt", "--mode", "sample", "--samples", "50000", "--seed", "9"];
    let one = run(dir, &[&args[..], &["--workers", "1"]].concat());
    let four = run(dir, &[&args[..], &["--workers", "4"]].concat());
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    let exact: Vec<&str> = ["count", "--shape", "1,2,2", "--in", "g.txt", "--mode", "exact"].to_vec();
    let one = run(dir, &[&exact[..], &["--workers", "1"]].concat());
    let four = run(dir, &[&exact[..], &["--workers", "4"]].concat());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn replay_reproduces_outputs() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["gen", "random", "--n", "60", "--p", "0.3", "--seed", "4", "--out", "g.txt"]);
    let first = fs::read(dir.join("g.txt")).unwrap();
    fs::remove_file(dir.join("g.txt")).unwrap();
    ok(dir, &["replay", "g.txt.manifest.json"]);
    assert_eq!(fs::read(dir.join("g.txt")).unwrap(), first);

    let args = ["count", "--shape", "1,2,2", "--in", "g.txt", "--mode", "sample", "--samples", "30000", "--seed", "3"];
    let original = run(dir, &[&args[..], &["--manifest", "c.json"]].concat());
    let again = run(dir, &["replay", "c.json"]);
    assert_eq!(code(&again), 0);
    assert_eq!(original.stdout, again.stdout);

    let out = run(dir, &["replay", "missing.json"]);
    assert_eq!(code(&out), 2);
}
