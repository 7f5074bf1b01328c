//! Validation report for newform and curve tables.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;

use clap::ValueEnum;
use murmur_core::ingest::{parse_curves_str, parse_newforms_str};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputKind {
    Newforms,
    Curves,
}

/// Decade bucket [10^k, 10^(k+1)) holding `n`.
fn decade(n: u64) -> (u64, u64) {
    let mut lo = 1;
    while lo * 10 <= n {
        lo *= 10;
    }
    (lo, lo * 10)
}

fn push_counts(out: &mut String, heading: &str, counts: &BTreeMap<String, u64>) {
    writeln!(out, "{heading}:").unwrap();
    for (k, v) in counts {
        writeln!(out, "  {k}: {v}").unwrap();
    }
}

/// Parses and validates `path`, returning a plain-text summary.
pub fn ingest_report(path: &Path, kind: InputKind) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let prov = path.display().to_string();
    let mut out = String::new();
    let mut ranges: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    let mut roots: BTreeMap<String, u64> = BTreeMap::new();
    match kind {
        InputKind::Curves => {
            let ds = parse_curves_str(&text, &prov)?;
            writeln!(out, "records: {}", ds.len()).unwrap();
            for r in ds.records() {
                *ranges.entry(decade(r.conductor)).or_default() += 1;
                *roots.entry(format!("root {:+}", r.global_root)).or_default() += 1;
            }
        }
        InputKind::Newforms => {
            let ds = parse_newforms_str(&text, &prov)?;
            writeln!(out, "records: {}", ds.len()).unwrap();
            let mut weights: BTreeMap<String, u64> = BTreeMap::new();
            let mut patterns: BTreeMap<String, u64> = BTreeMap::new();
            for r in ds.records() {
                *ranges.entry(decade(r.level)).or_default() += 1;
                *roots.entry(format!("root {:+}", r.global_root)).or_default() += 1;
                *weights.entry(format!("weight {}", r.weight)).or_default() += 1;
                if let Some(p) = r.sign_pattern() {
                    *patterns.entry(p.tag().to_string()).or_default() += 1;
                }
            }
            if !weights.is_empty() {
                push_counts(&mut out, "weights", &weights);
            }
            if !patterns.is_empty() {
                push_counts(&mut out, "local sign patterns at levels pq", &patterns);
            }
        }
    }
    if !ranges.is_empty() {
        writeln!(out, "levels:").unwrap();
        for ((lo, hi), c) in ranges {
            writeln!(out, "  [{lo}, {hi}): {c}").unwrap();
        }
    }
    if !roots.is_empty() {
        push_counts(&mut out, "root numbers", &roots);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(name: &str) -> std::path::PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
    }

    #[test]
    fn five_curves() {
        let r = ingest_report(&fixture("curves_five.txt"), InputKind::Curves).unwrap();
        assert!(r.starts_with("records: 5\n"), "{r}");
        assert!(r.contains("root +1: 5"));
        assert!(r.contains("[10, 100): 5"));
    }

    #[test]
    fn empty_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("e.txt");
        std::fs::write(&p, "").unwrap();
        assert_eq!(ingest_report(&p, InputKind::Newforms).unwrap(), "records: 0\n");
    }

    #[test]
    fn decades() {
        assert_eq!(decade(1), (1, 10));
        assert_eq!(decade(99), (10, 100));
        assert_eq!(decade(100), (100, 1000));
    }
}
