//! Elliptic curve tables and a_p by point counting.

use std::fmt::Write as _;
use std::path::Path;

use super::{parse_int, Dataset, IngestError, LevelRecord};
use crate::arith::is_prime_u64;

const HEADER: &str = "#murmur-curves v1";

/// y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6 with its conductor and root number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRecord {
    pub conductor: u64,
    pub label: String,
    pub a_invariants: [i64; 5],
    pub global_root: i8,
}

impl LevelRecord for CurveRecord {
    fn level(&self) -> u64 {
        self.conductor
    }
    fn label(&self) -> &str {
        &self.label
    }
}

impl CurveRecord {
    /// Discriminant of the Weierstrass model.
    pub fn discriminant(&self) -> i128 {
        let [a1, a2, a3, a4, a6] = self.a_invariants.map(|a| a as i128);
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    }
}

fn parse_row(row: &str, line: usize) -> Result<CurveRecord, IngestError> {
    let cols: Vec<&str> = row.split_whitespace().collect();
    if cols.len() != 8 {
        return Err(IngestError::Parse { line, msg: format!("expected 8 fields, found {}", cols.len()) });
    }
    let conductor: u64 = parse_int(cols[0], line, "conductor")?;
    let label = cols[1].to_string();
    let mut a = [0i64; 5];
    for (slot, s) in a.iter_mut().zip(&cols[2..7]) {
        *slot = parse_int(s, line, "a-invariant")?;
    }
    let global_root: i8 = parse_int(cols[7], line, "root number")?;
    let rec = CurveRecord { conductor, label, a_invariants: a, global_root };
    let fail = |msg: &str| IngestError::Validation { line, record: rec.label.clone(), msg: msg.into() };
    if conductor == 0 {
        return Err(fail("conductor must be positive"));
    }
    if global_root.abs() != 1 {
        return Err(fail("root number must be ±1"));
    }
    if rec.discriminant() == 0 {
        return Err(fail("singular Weierstrass model (zero discriminant)"));
    }
    Ok(rec)
}

pub fn parse_curves_str(text: &str, provenance: &str) -> Result<Dataset<CurveRecord>, IngestError> {
    let mut records = Vec::new();
    let mut seen = std::collections::HashSet::new();
    if text.trim().is_empty() {
        return Ok(Dataset::new(records, provenance));
    }
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let row = raw.trim();
        if i == 0 {
            if row != HEADER {
                return Err(IngestError::Parse { line, msg: format!("expected header `{HEADER}`") });
            }
            continue;
        }
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        let rec = parse_row(row, line)?;
        if !seen.insert((rec.conductor, rec.label.clone())) {
            return Err(IngestError::Validation { line, record: rec.label, msg: "duplicate (conductor, label)".into() });
        }
        records.push(rec);
    }
    Ok(Dataset::new(records, provenance))
}

pub fn parse_curves(path: impl AsRef<Path>) -> Result<Dataset<CurveRecord>, IngestError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_curves_str(&text, &path.display().to_string())
}

pub fn serialize_curves(ds: &Dataset<CurveRecord>) -> String {
    let mut out = format!("{HEADER}\n");
    for r in ds.records() {
        let [a1, a2, a3, a4, a6] = r.a_invariants;
        let _ = writeln!(out, "{} {} {a1} {a2} {a3} {a4} {a6} {}", r.conductor, r.label, r.global_root);
    }
    out
}

/// a_p = p + 1 − #E(F_p) at a prime of good reduction.
///
/// For odd p the model is completed to (2y + a1x + a3)² = 4x³ + b2x² + 2b4x + b6
/// and the affine count is Σ_x (1 + χ(rhs(x))); p = 2 is counted directly.
pub fn curve_ap(curve: &CurveRecord, p: u64) -> Result<i64, IngestError> {
    if !is_prime_u64(p) {
        return Err(IngestError::Domain(format!("{p} is not prime")));
    }
    if curve.conductor % p == 0 {
        return Err(IngestError::Domain(format!("{} has bad reduction at {p}", curve.label)));
    }
    if curve.discriminant() % p as i128 == 0 {
        return Err(IngestError::Domain(format!("model of {} is not minimal at {p}", curve.label)));
    }
    let m = p as i128;
    let [a1, a2, a3, a4, a6] = curve.a_invariants.map(|a| (a as i128).rem_euclid(m));
    if p == 2 {
        let mut affine = 0i64;
        for x in 0..2i128 {
            for y in 0..2i128 {
                let lhs = y * y + a1 * x * y + a3 * y;
                let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                if (lhs - rhs).rem_euclid(2) == 0 {
                    affine += 1;
                }
            }
        }
        return Ok(p as i64 + 1 - (affine + 1));
    }
    let b2 = (a1 * a1 + 4 * a2) % m;
    let b4 = (2 * a4 + a1 * a3) % m;
    let b6 = (a3 * a3 + 4 * a6) % m;
    let pu = p as usize;
    let mut is_square = vec![false; pu];
    for x in 0..pu {
        is_square[x * x % pu] = true;
    }
    let mut chi_sum = 0i64;
    for x in 0..m {
        let v = (((4 * x + b2) * x + 2 * b4) * x + b6).rem_euclid(m) as usize;
        if v != 0 {
            chi_sum += if is_square[v] { 1 } else { -1 };
        }
    }
    Ok(-chi_sum)
}
