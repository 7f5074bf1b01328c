//! End-to-end runs of the `murmur` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn murmur(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_murmur")).args(args).output().unwrap()
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

#[test]
fn mobius_at_x10() {
    let dir = tempfile::tempdir().unwrap();
    let out = murmur(&["run", "mobius", "--x", "10", "--out", &p(dir.path(), "o")]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("o/mobius_x10.csv")).unwrap();
    let row = csv.lines().find(|l| l.starts_with("23,")).unwrap();
    let value: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((value + 22.21).abs() < 0.01, "{row}");
    for extra in ["mobius_x10_class.csv", "mobius_x10_approx.csv", "mobius_x10.json"] {
        assert!(dir.path().join("o").join(extra).exists(), "{extra}");
    }
}

#[test]
fn csv_rows_sorted_by_class_then_x() {
    let dir = tempfile::tempdir().unwrap();
    let out = murmur(&["run", "bqf-odd", "--x", "40", "--out", &p(dir.path(), "o")]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("o/bqf-odd_x40.csv")).unwrap();
    let keys: Vec<(String, u64)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[3].to_string(), f[0].parse().unwrap())
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(keys.iter().any(|k| k.0 == "odd1mod8") && keys.iter().any(|k| k.0 == "odd5mod8"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "x = 10\nxmax-ratio = \"1\"\n").unwrap();
    let out = murmur(&["run", "bqf-odd1", "--config", &cfg.display().to_string(), "--x", "20", "--out", &p(dir.path(), "o")]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o/bqf-odd1_x20.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["x"], 20);
    assert_eq!(manifest["options"]["xmax-ratio"], "1");
    assert_eq!(manifest["inputs"].as_array().unwrap().len(), 1);
    let csv = std::fs::read_to_string(dir.path().join("o/bqf-odd1_x20.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.split(',').next().unwrap().parse::<u64>().unwrap() <= 20));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = p(dir.path(), "o");
    assert_eq!(murmur(&["run", "no-such", "--x", "10"]).status.code(), Some(2));
    assert_eq!(murmur(&["run", "ec-fixed-root", "--x", "10", "--out", &o]).status.code(), Some(2));
    assert_eq!(murmur(&["run", "delta", "--x", "10", "--beta", "1", "--out", &o]).status.code(), Some(2));
    let strict = murmur(&["run", "no-root", "--x", "10", "--xi-policy", "strict", "--out", &o]);
    assert_eq!(strict.status.code(), Some(4));
    assert!(text(&strict.stderr).contains("class-number terms"));
}

#[test]
fn ingest_reports() {
    let out = murmur(&["ingest", &data("curves_five.txt"), "--kind", "curves"]);
    assert!(out.status.success());
    let report = text(&out.stdout);
    assert!(report.contains("records: 5") && report.contains("root +1: 5"), "{report}");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "#murmur-newforms v1 pmax=3\n11,2,a,1,1,11:-1,-2;-1\n11,2,b,1,-1,11:-1,-2;-1\n").unwrap();
    let out = murmur(&["ingest", &bad.display().to_string(), "--kind", "newforms"]);
    assert_ne!(out.status.code(), Some(0));
    assert!(text(&out.stderr).contains("line 3"), "{}", text(&out.stderr));

    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    let out = murmur(&["ingest", &empty.display().to_string(), "--kind", "newforms"]);
    assert!(out.status.success());
    assert_eq!(text(&out.stdout), "records: 0\n");
}

#[test]
fn plot_is_deterministic_and_handles_empty_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = murmur(&["run", "bqf-odd", "--x", "30", "--out", &p(dir.path(), "o")]);
    assert!(out.status.success());
    let csv = p(dir.path(), "o/bqf-odd_x30.csv");
    let (a, b) = (p(dir.path(), "a.svg"), p(dir.path(), "b.svg"));
    assert!(murmur(&["plot", &csv, &a]).status.success());
    assert!(murmur(&["plot", &csv, &b]).status.success());
    let svg = std::fs::read(&a).unwrap();
    assert_eq!(svg, std::fs::read(&b).unwrap());
    assert!(text(&svg).contains("odd1mod8") && text(&svg).contains("odd5mod8"));

    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "x,x_scaled,value,class\n").unwrap();
    let out = murmur(&["plot", &empty.display().to_string(), &p(dir.path(), "e.svg")]);
    assert!(out.status.success());
    assert!(text(&out.stderr).contains("warning"));

    let junk = dir.path().join("junk.csv");
    std::fs::write(&junk, "p,value\n1,2\n").unwrap();
    assert_eq!(murmur(&["plot", &junk.display().to_string(), &p(dir.path(), "j.svg")]).status.code(), Some(2));
}

#[test]
fn sieve_reuses_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache: PathBuf = dir.path().join("cache");
    let c = cache.display().to_string();
    let first = murmur(&["sieve", "--limit", "10^5", "--cache-dir", &c]);
    assert!(first.status.success());
    assert!(text(&first.stdout).contains("built"));
    assert!(cache.join("factor_100000.bin").exists() && cache.join("hurwitz_100000.bin").exists());
    let second = murmur(&["sieve", "--limit", "100000", "--cache-dir", &c]);
    assert_eq!(text(&second.stdout).matches("valid cache, kept").count(), 2);
}

#[test]
fn catalog_lists_every_figure() {
    let out = murmur(&["catalog"]);
    assert!(out.status.success());
    let s = text(&out.stdout);
    assert_eq!(s.lines().filter(|l| l.trim_start().starts_with("murmur run")).count(), 25);
}
