use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn pohp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pohp")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const K3_TOTAL: &str = r#"{"n":3,"edges":[[0,1],[1,2],[0,2]],"constraints":[[0,1],[1,2]]}"#;
const C4: &str = r#"{"n":4,"edges":[[0,1],[1,2],[2,3],[0,3]]}"#;

#[test]
fn oracle_on_a_totally_ordered_triangle() {
    let dir = TempDir::new().unwrap();
    let k3 = write(dir.path(), "k3.json", K3_TOTAL);
    let out = pohp(&["solve", "--algo", "oracle", s(&k3)]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["feasible"], true);
    assert_eq!(doc["order"], serde_json::json!([0, 1, 2]));
    assert_eq!(doc["algo"], "oracle");
    assert!(doc["elapsed_ms"].is_number());
}

#[test]
fn block_solver_rejects_a_four_cycle() {
    let dir = TempDir::new().unwrap();
    let c4 = write(dir.path(), "c4.json", C4);
    let out = pohp(&["solve", "--algo", "block", s(&c4)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a block graph"));
}

#[test]
fn decision_only_solvers_refuse_min_cost() {
    let dir = TempDir::new().unwrap();
    let weighted = write(dir.path(), "w.json", r#"{"n":2,"edges":[[0,1,3]],"objective":"min"}"#);
    for algo in ["block", "clique-module", "dist-block", "edge-block"] {
        assert_eq!(code(&pohp(&["solve", "--algo", algo, s(&weighted)])), 2, "{algo}");
    }
    let out = pohp(&["solve", "--algo", "fes", s(&weighted)]);
    assert_eq!(stdout_json(&out)["cost"], 3);
}

#[test]
fn expectations_set_the_exit_status() {
    let dir = TempDir::new().unwrap();
    let stuck = write(dir.path(), "p3.json", r#"{"n":3,"edges":[[0,1],[1,2]],"constraints":[[0,1],[2,1]]}"#);
    let out = pohp(&["solve", s(&stuck), "--expect", "yes"]);
    assert_eq!(code(&out), 1);
    let doc = stdout_json(&out);
    assert_eq!(doc["feasible"], false);
    assert!(doc["order"].is_null() && doc["cost"].is_null());
    assert_eq!(code(&pohp(&["solve", s(&stuck), "--expect", "no"])), 0);
}

#[test]
fn auto_follows_certificates() {
    let dir = TempDir::new().unwrap();
    let with_w = write(
        dir.path(),
        "w.json",
        r#"{"n":4,"edges":[[0,1],[1,2],[2,3],[0,3]],"certificates":{"deletion_vertices":[3]}}"#,
    );
    assert_eq!(stdout_json(&pohp(&["solve", s(&with_w)]))["algo"], "dist-block");
    let with_f = write(
        dir.path(),
        "f.json",
        r#"{"n":4,"edges":[[0,1],[1,2],[2,3],[0,3]],"certificates":{"deletion_edges":[[0,3]]}}"#,
    );
    assert_eq!(stdout_json(&pohp(&["solve", s(&with_f)]))["algo"], "edge-block");
    let bare = write(dir.path(), "bare.json", C4);
    assert_eq!(stdout_json(&pohp(&["solve", s(&bare)]))["algo"], "oracle");
    assert_eq!(code(&pohp(&["solve", s(&bare), "--max-n", "3"])), 2);
}

#[test]
fn generators_are_byte_stable() {
    let runs = [
        vec!["gen", "mcp-d2p", "--k", "2", "--q", "1", "--seed", "7"],
        vec!["gen", "mcp-d2c", "--k", "3", "--q", "2", "--seed", "3", "--variant", "cluster-modules"],
        vec!["gen", "ecc", "--n", "3", "--seed", "5"],
        vec!["gen", "gnp", "--n", "12", "--p", "0.4", "--d", "5", "--seed", "9", "--max-weight", "7"],
    ];
    for args in runs {
        let a = pohp(&args);
        let b = pohp(&args);
        assert_eq!(code(&a), 0, "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let first = pohp(&["gen", "gnp", "--n", "12", "--p", "0.4", "--seed", "1"]);
    let second = pohp(&["gen", "gnp", "--n", "12", "--p", "0.4", "--seed", "2"]);
    assert_ne!(first.stdout, second.stdout);
}

#[test]
fn solve_output_is_reproducible_without_timing() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.json");
    pohp(&["gen", "gnp", "--n", "10", "--p", "0.5", "--d", "4", "--seed", "3", "-o", s(&g)]);
    let a = pohp(&["solve", s(&g), "--no-timing"]);
    let b = pohp(&["solve", s(&g), "--no-timing"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout_json(&a)["elapsed_ms"].is_null());
}

#[test]
fn ecc_reads_a_constraints_file() {
    let dir = TempDir::new().unwrap();
    let pairs = write(dir.path(), "pairs.json", "[[0,0],[1,0]]");
    let inst = dir.path().join("ecc.json");
    let out = pohp(&["gen", "ecc", "--n", "2", "--constraints-file", s(&pairs), "-o", s(&inst)]);
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_slice(&std::fs::read(&inst).unwrap()).unwrap();
    assert_eq!(doc["n"], 10);
    assert_eq!(doc["certificates"]["clique_cover"].as_array().unwrap().len(), 2);
    let bad = write(dir.path(), "bad.json", "[[0,5]]");
    assert_eq!(code(&pohp(&["gen", "ecc", "--n", "2", "--constraints-file", s(&bad)])), 2);
}

#[test]
fn verify_reports_missing_edges() {
    let dir = TempDir::new().unwrap();
    let path = write(dir.path(), "p3.json", r#"{"n":3,"edges":[[0,1],[1,2]]}"#);
    let out = pohp(&["verify", s(&path), "--order", "1,0,2"]);
    assert_eq!(code(&out), 1);
    let doc = stdout_json(&out);
    assert_eq!(doc["edges_present"], false);
    assert_eq!(doc["is_permutation"], true);
    assert_eq!(doc["valid"], false);
    let ok = pohp(&["verify", s(&path), "--order", "0,1,2"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(stdout_json(&ok)["valid"], true);
}

#[test]
fn verify_accepts_solve_output() {
    let dir = TempDir::new().unwrap();
    let k3 = write(dir.path(), "k3.json", K3_TOTAL);
    let sol = dir.path().join("sol.json");
    std::fs::write(&sol, pohp(&["solve", s(&k3)]).stdout).unwrap();
    assert_eq!(code(&pohp(&["verify", s(&k3), "--solution", s(&sol)])), 0);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&pohp(&[])), 64);
    assert_eq!(code(&pohp(&["solve"])), 64);
    assert_eq!(code(&pohp(&["solve", "x.json", "--algo", "nope"])), 64);
    assert_eq!(code(&pohp(&["gen", "mcp-d2p", "--k", "0", "--q", "1"])), 64);
    assert_eq!(code(&pohp(&["verify", "x.json"])), 64);
    assert_eq!(code(&pohp(&["--help"])), 0);
}

#[test]
fn unreadable_instances_are_precondition_failures() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&pohp(&["solve", s(&dir.path().join("absent.json"))])), 2);
    let broken = write(dir.path(), "broken.json", r#"{"n":2,"edges":[[0,0]]}"#);
    assert_eq!(code(&pohp(&["solve", s(&broken)])), 2);
}

#[test]
fn bench_emits_one_row_per_instance_and_solver() {
    let dir = TempDir::new().unwrap();
    let corpus = dir.path().join("corpus");
    std::fs::create_dir(&corpus).unwrap();
    for seed in 0..20 {
        let path = corpus.join(format!("g{seed:02}.json"));
        let seed = seed.to_string();
        let out = pohp(&["gen", "gnp", "--n", "8", "--p", "0.5", "--d", "3", "--seed", &seed, "-o", s(&path)]);
        assert_eq!(code(&out), 0);
    }
    let csv_path = dir.path().join("out.csv");
    let solvers = ["oracle", "fes", "block", "clique-module"];
    let out = pohp(&[
        "bench",
        s(&corpus),
        "--algos",
        &solvers.join(","),
        "--verify-with-oracle",
        "--jobs",
        "4",
        "-o",
        s(&csv_path),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["instance", "algo", "feasible", "cost", "elapsed_ms", "verdict_matches_oracle"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 20 * solvers.len());
    for algo in solvers {
        let mine: Vec<_> = rows.iter().filter(|r| &r[1] == algo).collect();
        assert_eq!(mine.len(), 20, "{algo}");
        for r in mine {
            assert!(["true", "false", "error"].contains(&&r[2]), "{r:?}");
            assert_ne!(&r[5], "false", "{r:?}");
        }
    }
    assert!(rows.iter().filter(|r| &r[1] == "oracle").all(|r| &r[5] == "true"));
}

/// Generated corpora solved by every applicable solver; the oracle must
/// never disagree.
#[test]
fn differential_run_against_the_oracle() {
    let dir = TempDir::new().unwrap();
    let mut cases: Vec<(Vec<String>, Vec<&str>)> = Vec::new();
    let owned = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    for seed in 0..30 {
        let seed = seed.to_string();
        cases.push((
            owned(&["gnp", "--n", "9", "--p", "0.45", "--d", "3", "--seed", &seed]),
            vec!["auto", "search", "oracle", "fes", "clique-module"],
        ));
        cases.push((
            owned(&["gnp", "--n", "8", "--p", "0.5", "--d", "2", "--max-weight", "9", "--seed", &seed]),
            vec!["auto", "search", "fes"],
        ));
    }
    for seed in 0..6 {
        let seed = seed.to_string();
        let density = if seed.parse::<u32>().unwrap() % 2 == 0 { "0.9" } else { "0.2" };
        cases.push((
            owned(&["mcp-d2c", "--k", "2", "--q", "2", "--density", density, "--seed", &seed]),
            vec!["auto", "clique-module"],
        ));
        cases.push((owned(&["mcp-d2p", "--k", "2", "--q", "2", "--density", density, "--seed", &seed]), vec!["auto"]));
        cases.push((owned(&["ecc", "--n", "2", "--density", "0.4", "--seed", &seed]), vec!["auto", "oracle"]));
    }
    let mut checked = 0;
    for (i, (gen, algos)) in cases.iter().enumerate() {
        let path = dir.path().join(format!("case{i}.json"));
        let mut args: Vec<&str> = vec!["gen"];
        args.extend(gen.iter().map(String::as_str));
        args.extend(["-o", s(&path)]);
        let out = pohp(&args);
        assert_eq!(code(&out), 0, "{gen:?}: {}", String::from_utf8_lossy(&out.stderr));
        for algo in algos {
            let mut args = vec!["solve", s(&path), "--verify-with-oracle"];
            match *algo {
                "search" => args.push("--find-certificate"),
                _ => args.extend(["--algo", algo]),
            }
            let out = pohp(&args);
            let status = code(&out);
            assert_ne!(status, 3, "{gen:?} {algo}: {}", String::from_utf8_lossy(&out.stdout));
            if status == 0 {
                assert_eq!(stdout_json(&out)["verdict_matches_oracle"], true, "{gen:?} {algo}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 200, "only {checked} runs were comparable");
}
