//! Ingestion of newform and elliptic-curve tables, point counting, and the
//! binary cache for sieve tables.

mod cache;
mod curves;
mod newforms;

pub use cache::{load_factor_table, load_hurwitz_table, save_factor_table, save_hurwitz_table, TableKind, CACHE_MAGIC, CACHE_VERSION};
pub use curves::{curve_ap, parse_curves, parse_curves_str, serialize_curves, CurveRecord};
pub use newforms::{parse_newforms, parse_newforms_str, serialize_newforms, NewformRecord, SignPattern};

use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: record {record}: {msg}")]
    Validation { line: usize, record: String, msg: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("bad magic bytes in table cache")]
    BadMagic,
    #[error("unsupported table cache version {0}")]
    UnsupportedVersion(u32),
    #[error("table cache holds kind {found}, expected {expected}")]
    WrongKind { expected: u8, found: u8 },
    #[error("table cache truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: u64, found: u64 },
    #[error("table cache checksum mismatch (stored {stored:#018x}, computed {computed:#018x})")]
    Checksum { stored: u64, computed: u64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Records keyed by level or conductor.
pub trait LevelRecord {
    fn level(&self) -> u64;
    fn label(&self) -> &str;
}

/// Immutable collection of one record kind, ordered by (level, label).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<R> {
    records: Vec<R>,
    by_level: BTreeMap<u64, std::ops::Range<usize>>,
    pub provenance: String,
    /// Largest prime covered by per-prime columns, when the format has them.
    pub pmax: Option<u64>,
}

impl<R: LevelRecord> Dataset<R> {
    pub fn new(mut records: Vec<R>, provenance: impl Into<String>) -> Self {
        records.sort_by(|a, b| (a.level(), a.label()).cmp(&(b.level(), b.label())));
        let mut by_level = BTreeMap::new();
        let mut start = 0;
        for i in 1..=records.len() {
            if i == records.len() || records[i].level() != records[start].level() {
                by_level.insert(records[start].level(), start..i);
                start = i;
            }
        }
        Dataset { records, by_level, provenance: provenance.into(), pmax: None }
    }

    pub fn records(&self) -> &[R] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn at_level(&self, level: u64) -> &[R] {
        self.by_level.get(&level).map(|r| &self.records[r.clone()]).unwrap_or(&[])
    }

    pub fn levels(&self) -> impl Iterator<Item = u64> + '_ {
        self.by_level.keys().copied()
    }

    /// Records with level in `lo..=hi`, in dataset order.
    pub fn in_range(&self, lo: u64, hi: u64) -> impl Iterator<Item = &R> + '_ {
        self.by_level.range(lo..=hi).flat_map(move |(_, r)| self.records[r.clone()].iter())
    }
}

pub(crate) fn parse_int<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T, IngestError> {
    s.trim().parse().map_err(|_| IngestError::Parse { line, msg: format!("bad {what}: {s:?}") })
}
