//! Factor and Hurwitz tables backed by an optional cache directory.

use std::path::{Path, PathBuf};

use murmur_core::arith::FactorTable;
use murmur_core::ingest::{load_factor_table, load_hurwitz_table, save_factor_table, save_hurwitz_table};
use murmur_core::quadforms::{build_hurwitz_table_par, HurwitzTable};
use serde::Serialize;

use crate::CliError;

/// Largest Hurwitz table a run builds on its own (512 MiB of entries).
/// Past this the trace code evaluates H through fundamental discriminants.
pub const HURWITZ_AUTO_CAP: u64 = 1 << 27;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    Cache,
    Built,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableSource {
    pub path: Option<PathBuf>,
    pub limit: u64,
    pub origin: Origin,
}

#[derive(Clone, Copy)]
enum Kind {
    Factor,
    Hurwitz,
}

impl Kind {
    fn prefix(self) -> &'static str {
        match self {
            Kind::Factor => "factor",
            Kind::Hurwitz => "hurwitz",
        }
    }
}

pub fn factor_path(dir: &Path, limit: u64) -> PathBuf {
    dir.join(format!("factor_{limit}.bin"))
}

pub fn hurwitz_path(dir: &Path, limit: u64) -> PathBuf {
    dir.join(format!("hurwitz_{limit}.bin"))
}

fn cache_path(kind: Kind, dir: &Path, limit: u64) -> PathBuf {
    match kind {
        Kind::Factor => factor_path(dir, limit),
        Kind::Hurwitz => hurwitz_path(dir, limit),
    }
}

/// Cached files of one kind whose limit covers `need`, smallest first.
fn candidates(kind: Kind, dir: &Path, need: u64) -> Vec<(u64, PathBuf)> {
    let Ok(entries) = std::fs::read_dir(dir) else { return Vec::new() };
    let mut out: Vec<(u64, PathBuf)> = entries
        .filter_map(|e| e.ok())
        .filter_map(|e| {
            let name = e.file_name().into_string().ok()?;
            let limit = name.strip_prefix(kind.prefix())?.strip_prefix('_')?.strip_suffix(".bin")?.parse().ok()?;
            (limit >= need).then(|| (limit, e.path()))
        })
        .collect();
    out.sort();
    out
}

fn resource(what: &str, limit: u64, e: impl std::fmt::Display) -> CliError {
    CliError::Resource(format!("{what} table of limit {limit}: {e}"))
}

fn build_factor(limit: u64) -> Result<FactorTable, CliError> {
    FactorTable::build(limit).map_err(|e| resource("factor", limit, e))
}

fn build_hurwitz(limit: u64) -> Result<HurwitzTable, CliError> {
    build_hurwitz_table_par(limit).map_err(|e| resource("hurwitz", limit, e))
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn obtain<T>(
    kind: Kind,
    cache: Option<&Path>,
    need: u64,
    warnings: &mut Vec<String>,
    load: impl Fn(&Path) -> Result<T, murmur_core::IngestError>,
    build: impl Fn(u64) -> Result<T, CliError>,
    save: impl Fn(&Path, &T) -> Result<(), murmur_core::IngestError>,
) -> Result<(T, TableSource), CliError> {
    let Some(dir) = cache else {
        return Ok((build(need)?, TableSource { path: None, limit: need, origin: Origin::Built }));
    };
    for (limit, path) in candidates(kind, dir, need) {
        match load(&path) {
            Ok(t) => return Ok((t, TableSource { path: Some(path), limit, origin: Origin::Cache })),
            Err(e) => warnings.push(format!("ignoring unreadable cache {}: {e}", path.display())),
        }
    }
    let table = build(need)?;
    create_dir(dir)?;
    let path = cache_path(kind, dir, need);
    save(&path, &table)?;
    Ok((table, TableSource { path: Some(path), limit: need, origin: Origin::Built }))
}

/// A factor table covering `need`, from the cache when one is there.
pub fn obtain_factor(cache: Option<&Path>, need: u64, warnings: &mut Vec<String>) -> Result<(FactorTable, TableSource), CliError> {
    obtain(Kind::Factor, cache, need, warnings, |p| load_factor_table(p), build_factor, |p, t| save_factor_table(p, t))
}

pub fn obtain_hurwitz(cache: Option<&Path>, need: u64, warnings: &mut Vec<String>) -> Result<(HurwitzTable, TableSource), CliError> {
    obtain(Kind::Hurwitz, cache, need, warnings, |p| load_hurwitz_table(p), build_hurwitz, |p, t| save_hurwitz_table(p, t))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SieveAction {
    Reused,
    Built,
    Rebuilt(String),
}

#[derive(Debug, Clone)]
pub struct SieveReport {
    pub factor: (PathBuf, SieveAction),
    pub hurwitz: (PathBuf, SieveAction),
}

fn refresh<T>(
    path: PathBuf,
    limit: u64,
    load: impl Fn(&Path) -> Result<T, murmur_core::IngestError>,
    build: impl Fn(u64) -> Result<T, CliError>,
    save: impl Fn(&Path, &T) -> Result<(), murmur_core::IngestError>,
) -> Result<(PathBuf, SieveAction), CliError> {
    let action = if path.exists() {
        match load(&path) {
            Ok(_) => return Ok((path, SieveAction::Reused)),
            Err(e) => SieveAction::Rebuilt(e.to_string()),
        }
    } else {
        SieveAction::Built
    };
    save(&path, &build(limit)?)?;
    Ok((path, action))
}

/// Reads a table limit written as `10000000`, `10^7` or `1e7`.
pub fn parse_limit(s: &str) -> Result<u64, CliError> {
    let bad = || CliError::Usage(format!("cannot read {s:?} as a table limit"));
    let t = s.trim().replace('_', "");
    let pow = |base: &str, exp: &str| -> Result<u64, CliError> {
        let b: u64 = base.parse().map_err(|_| bad())?;
        let e: u32 = exp.parse().map_err(|_| bad())?;
        b.checked_pow(e).ok_or_else(bad)
    };
    if let Some((b, e)) = t.split_once('^') {
        pow(b, e)
    } else if let Some((m, e)) = t.split_once(['e', 'E']) {
        let m: u64 = m.parse().map_err(|_| bad())?;
        m.checked_mul(pow("10", e)?).ok_or_else(bad)
    } else {
        t.parse().map_err(|_| bad())
    }
}

/// Builds and persists both tables at `limit`, keeping valid existing files.
pub fn sieve(limit: u64, dir: &Path) -> Result<SieveReport, CliError> {
    create_dir(dir)?;
    let factor = refresh(factor_path(dir, limit), limit, |p| load_factor_table(p), build_factor, |p, t| save_factor_table(p, t))?;
    let hurwitz = refresh(hurwitz_path(dir, limit), limit, |p| load_hurwitz_table(p), build_hurwitz, |p, t| save_hurwitz_table(p, t))?;
    Ok(SieveReport { factor, hurwitz })
}
