//! Newform orbit tables.
//!
//! ```text
//! #murmur-newforms v1 pmax=19
//! 11,2,a,1,1,11:-1,-2;-1;1;-2;1;4;-2;0
//! ```
//!
//! Columns: level, weight, orbit label, orbit dimension, global root number,
//! Atkin–Lehner eigenvalues `p:±1` joined by `;`, and the orbit traces of
//! a_p for every prime p ≤ pmax joined by `;`.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use super::{parse_int, Dataset, IngestError, LevelRecord};
use crate::arith::{primes_up_to, Factorization};

const HEADER: &str = "#murmur-newforms v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewformRecord {
    pub level: u64,
    pub weight: u32,
    pub orbit_label: String,
    pub orbit_dim: u64,
    pub global_root: i8,
    /// λ_p for each prime p | level.
    pub al_eigenvalues: BTreeMap<u64, i8>,
    /// Orbit traces of a_p for the primes 2, 3, 5, ... in order.
    pub ap_traces: Vec<i64>,
}

/// Local root numbers (w_p, w_q) at a level pq with p < q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignPattern {
    pub small: i8,
    pub large: i8,
}

impl SignPattern {
    pub fn tag(self) -> &'static str {
        match (self.small > 0, self.large > 0) {
            (true, true) => "++",
            (true, false) => "+-",
            (false, true) => "-+",
            (false, false) => "--",
        }
    }
}

impl LevelRecord for NewformRecord {
    fn level(&self) -> u64 {
        self.level
    }
    fn label(&self) -> &str {
        &self.orbit_label
    }
}

impl NewformRecord {
    /// Local root number at p | level. At a prime exactly dividing the level
    /// this equals the Atkin–Lehner eigenvalue λ_p.
    pub fn local_root(&self, p: u64) -> Option<i8> {
        self.al_eigenvalues.get(&p).copied()
    }

    /// (−1)^{k/2} ∏ λ_p.
    pub fn implied_root(&self) -> i8 {
        let arch: i8 = if (self.weight / 2) % 2 == 0 { 1 } else { -1 };
        self.al_eigenvalues.values().fold(arch, |acc, &l| acc * l)
    }

    /// Sign pattern at a level that is a product of two distinct primes.
    pub fn sign_pattern(&self) -> Option<SignPattern> {
        let fac = Factorization::trial_division(self.level);
        match fac.pairs() {
            [(p, 1), (q, 1)] => Some(SignPattern { small: self.local_root(*p)?, large: self.local_root(*q)? }),
            _ => None,
        }
    }
}

fn parse_header(line: &str) -> Result<u64, IngestError> {
    let rest = line
        .trim()
        .strip_prefix(HEADER)
        .ok_or_else(|| IngestError::Parse { line: 1, msg: format!("expected header `{HEADER} pmax=<P>`") })?;
    let pmax = rest
        .trim()
        .strip_prefix("pmax=")
        .ok_or_else(|| IngestError::Parse { line: 1, msg: "header is missing pmax=<P>".into() })?;
    parse_int(pmax, 1, "pmax")
}

fn parse_row(row: &str, line: usize, expected_aps: usize) -> Result<NewformRecord, IngestError> {
    let cols: Vec<&str> = row.split(',').collect();
    if cols.len() != 7 {
        return Err(IngestError::Parse { line, msg: format!("expected 7 columns, found {}", cols.len()) });
    }
    let level: u64 = parse_int(cols[0], line, "level")?;
    let weight: u32 = parse_int(cols[1], line, "weight")?;
    let orbit_label = cols[2].trim().to_string();
    let orbit_dim: u64 = parse_int(cols[3], line, "orbit dimension")?;
    let global_root: i8 = parse_int(cols[4], line, "root number")?;
    let mut al_eigenvalues = BTreeMap::new();
    for entry in cols[5].split(';').filter(|e| !e.trim().is_empty()) {
        let (p, sign) = entry
            .split_once(':')
            .ok_or_else(|| IngestError::Parse { line, msg: format!("bad AL entry {entry:?}") })?;
        let p: u64 = parse_int(p, line, "AL prime")?;
        let sign: i8 = parse_int(sign, line, "AL sign")?;
        if al_eigenvalues.insert(p, sign).is_some() {
            return Err(IngestError::Parse { line, msg: format!("repeated AL prime {p}") });
        }
    }
    let ap_traces = cols[6]
        .split(';')
        .filter(|e| !e.trim().is_empty())
        .map(|v| parse_int(v, line, "a_p trace"))
        .collect::<Result<Vec<i64>, _>>()?;
    if ap_traces.len() != expected_aps {
        return Err(IngestError::Parse {
            line,
            msg: format!("expected {expected_aps} a_p traces, found {}", ap_traces.len()),
        });
    }
    let rec = NewformRecord { level, weight, orbit_label, orbit_dim, global_root, al_eigenvalues, ap_traces };
    validate(&rec, line)?;
    Ok(rec)
}

fn validate(rec: &NewformRecord, line: usize) -> Result<(), IngestError> {
    let fail = |msg: String| IngestError::Validation {
        line,
        record: format!("{}.{}.{}", rec.level, rec.weight, rec.orbit_label),
        msg,
    };
    if rec.level == 0 {
        return Err(fail("level must be positive".into()));
    }
    if rec.weight == 0 || rec.weight % 2 == 1 {
        return Err(fail(format!("weight {} is not an even positive integer", rec.weight)));
    }
    if rec.orbit_dim == 0 {
        return Err(fail("orbit dimension must be positive".into()));
    }
    if rec.global_root.abs() != 1 || rec.al_eigenvalues.values().any(|s| s.abs() != 1) {
        return Err(fail("signs must be ±1".into()));
    }
    let fac = Factorization::trial_division(rec.level);
    if !fac.is_squarefree() {
        return Err(fail("only squarefree levels are supported".into()));
    }
    let primes: Vec<u64> = fac.primes().collect();
    let keys: Vec<u64> = rec.al_eigenvalues.keys().copied().collect();
    if primes != keys {
        return Err(fail(format!("AL primes {keys:?} differ from the prime divisors {primes:?} of the level")));
    }
    if rec.implied_root() != rec.global_root {
        return Err(fail(format!(
            "root number {} inconsistent with AL signs (expected {})",
            rec.global_root,
            rec.implied_root()
        )));
    }
    Ok(())
}

pub fn parse_newforms_str(text: &str, provenance: &str) -> Result<Dataset<NewformRecord>, IngestError> {
    if text.trim().is_empty() {
        return Ok(Dataset::new(Vec::new(), provenance));
    }
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| IngestError::Parse { line: 1, msg: "empty file".into() })?;
    let pmax = parse_header(header)?;
    let expected = primes_up_to(pmax).len();
    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for (i, raw) in lines {
        let line = i + 1;
        let row = raw.trim();
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        let rec = parse_row(row, line, expected)?;
        if !seen.insert((rec.level, rec.orbit_label.clone())) {
            return Err(IngestError::Validation {
                line,
                record: format!("{}.{}.{}", rec.level, rec.weight, rec.orbit_label),
                msg: "duplicate (level, orbit label)".into(),
            });
        }
        records.push(rec);
    }
    let mut ds = Dataset::new(records, provenance);
    ds.pmax = Some(pmax);
    Ok(ds)
}

pub fn parse_newforms(path: impl AsRef<Path>) -> Result<Dataset<NewformRecord>, IngestError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_newforms_str(&text, &path.display().to_string())
}

pub fn serialize_newforms(ds: &Dataset<NewformRecord>) -> String {
    let pmax = ds.pmax.unwrap_or(1);
    let mut out = format!("{HEADER} pmax={pmax}\n");
    for r in ds.records() {
        let al = r.al_eigenvalues.iter().map(|(p, s)| format!("{p}:{s}")).collect::<Vec<_>>().join(";");
        let aps = r.ap_traces.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(";");
        let _ = writeln!(out, "{},{},{},{},{},{},{}", r.level, r.weight, r.orbit_label, r.orbit_dim, r.global_root, al, aps);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const ROW_11: &str = "11,2,a,1,1,11:-1,-2;-1;1;-2;1;4;-2;0";

    #[test]
    fn parses_level_eleven_row() {
        let ds = parse_newforms_str(&format!("{HEADER} pmax=19\n{ROW_11}\n"), "test").unwrap();
        assert_eq!(ds.len(), 1);
        let r = &ds.records()[0];
        assert_eq!(r.level, 11);
        assert_eq!(r.global_root, 1);
        assert_eq!(r.local_root(11), Some(-1));
        assert_eq!(r.ap_traces[0], -2);
        assert_eq!(ds.pmax, Some(19));
    }

    #[test]
    fn empty_file_with_header() {
        let ds = parse_newforms_str(&format!("{HEADER} pmax=50\n"), "test").unwrap();
        assert!(ds.is_empty());
    }

    #[test]
    fn rejects_inconsistent_root() {
        let err = parse_newforms_str(&format!("{HEADER} pmax=19\n11,2,a,1,-1,11:-1,-2;-1;1;-2;1;4;-2;0\n"), "t").unwrap_err();
        assert!(matches!(err, IngestError::Validation { line: 2, .. }), "{err}");
    }

    #[test]
    fn rejects_malformed_rows() {
        let bad = [
            "11,2,a,1,1,11:-1",
            "11,2,a,1,1,11:-1,-2;-1",
            "11,x,a,1,1,11:-1,-2;-1;1;-2;1;4;-2;0",
            "11,2,a,1,1,11=-1,-2;-1;1;-2;1;4;-2;0",
        ];
        for row in bad {
            let err = parse_newforms_str(&format!("{HEADER} pmax=19\n{row}\n"), "t").unwrap_err();
            assert!(matches!(err, IngestError::Parse { line: 2, .. }), "{row}: {err}");
        }
        assert!(parse_newforms_str("level,weight\n", "t").is_err());
    }

    #[test]
    fn rejects_wrong_al_primes_and_duplicates() {
        let err = parse_newforms_str(&format!("{HEADER} pmax=3\n14,2,a,1,-1,2:1,0;1\n"), "t").unwrap_err();
        assert!(matches!(err, IngestError::Validation { .. }));
        let dup = format!("{HEADER} pmax=19\n{ROW_11}\n{ROW_11}\n");
        assert!(matches!(parse_newforms_str(&dup, "t").unwrap_err(), IngestError::Validation { line: 3, .. }));
    }

    #[test]
    fn sign_patterns() {
        // k = 2, λ_2 = λ_7 = −1: local roots (−, −), global root −1·(−1)(−1) = −1.
        let text = format!("{HEADER} pmax=3\n14,2,x,1,-1,2:-1;7:-1,1;2\n");
        let ds = parse_newforms_str(&text, "t").unwrap();
        let p = ds.records()[0].sign_pattern().unwrap();
        assert_eq!(p.tag(), "--");
        assert_eq!(ds.records()[0].implied_root(), -1);
    }
}
