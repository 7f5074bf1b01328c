//! Averages over ingested newform and elliptic-curve tables.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::{Diagnostics, Exact, ExperimentConfig, ExperimentError, Series, SeriesPoint, SurdSum};
use crate::arith::{build_factor_table, is_prime_u64, primes_up_to, FactorTable};
use crate::ingest::{curve_ap, CurveRecord, Dataset, LevelRecord, NewformRecord};

/// A record that contributes a_p values to an average.
pub trait FormSource: LevelRecord + Sync {
    fn weight(&self) -> u32;
    fn root(&self) -> i8;
    /// Number of forms the record stands for.
    fn multiplicity(&self) -> u64;
    /// a_p summed over the record's forms; `prime_index` is the position of
    /// p in 2, 3, 5, .... `None` when the record has no value at p.
    fn ap(&self, p: u64, prime_index: usize) -> Option<i64>;
}

impl FormSource for NewformRecord {
    fn weight(&self) -> u32 {
        self.weight
    }
    fn root(&self) -> i8 {
        self.global_root
    }
    fn multiplicity(&self) -> u64 {
        self.orbit_dim
    }
    fn ap(&self, _p: u64, prime_index: usize) -> Option<i64> {
        self.ap_traces.get(prime_index).copied()
    }
}

impl FormSource for CurveRecord {
    fn weight(&self) -> u32 {
        2
    }
    fn root(&self) -> i8 {
        self.global_root
    }
    fn multiplicity(&self) -> u64 {
        1
    }
    fn ap(&self, p: u64, _prime_index: usize) -> Option<i64> {
        curve_ap(self, p).ok()
    }
}

/// p^{1 − k/2}.
fn normalization(p: u64, weight: u32) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(p).pow(weight / 2 - 1))
}

fn axis<R>(ds: &Dataset<R>, cfg: &ExperimentConfig) -> Vec<u64> {
    let top = ds.pmax.map_or(cfg.x_max(), |m| m.min(cfg.x_max()));
    primes_up_to(top)
}

fn factor_table_for(cfg: &ExperimentConfig) -> Result<FactorTable, ExperimentError> {
    Ok(build_factor_table(cfg.upper().max(16))?)
}

fn selected<'a, R: FormSource>(ds: &'a Dataset<R>, cfg: &ExperimentConfig) -> Result<Vec<&'a R>, ExperimentError> {
    cfg.validate()?;
    let factors = factor_table_for(cfg)?;
    let mut out = Vec::new();
    for r in ds.in_range(cfg.x, cfg.upper()) {
        if cfg.level_passes(r.level(), &factors)? {
            out.push(r);
        }
    }
    Ok(out)
}

fn tagged_point(cfg: &ExperimentConfig, tag: &str, x: u64, value: Exact) -> SeriesPoint {
    SeriesPoint { x, x_scaled: cfg.scaled(x), value, class_tag: tag.to_string() }
}

/// A^±(p, X) = p^{1−k/2} Σ' Σ_{root ±1} a_p / Σ' #F^±(N), tags "+" and "-".
pub fn data_fixed_root_series<R: FormSource>(ds: &Dataset<R>, cfg: &ExperimentConfig) -> Result<Series, ExperimentError> {
    let records = selected(ds, cfg)?;
    let primes = axis(ds, cfg);
    let rows: Vec<(u64, [Option<Exact>; 2], usize)> = primes
        .par_iter()
        .enumerate()
        .map(|(idx, &p)| {
            let mut nums = [BigRational::zero(), BigRational::zero()];
            let mut dens = [0u64; 2];
            let mut missing = 0;
            for r in records.iter().filter(|r| !cfg.coprime || r.level() % p != 0) {
                let slot = usize::from(r.root() < 0);
                match r.ap(p, idx) {
                    Some(a) => {
                        nums[slot] += normalization(p, r.weight()) * BigInt::from(a);
                        dens[slot] += r.multiplicity();
                    }
                    None => missing += 1,
                }
            }
            let [n0, n1] = nums;
            let value = |n: BigRational, d: u64| (d > 0).then(|| Exact::from_rational(n / BigInt::from(d)));
            (p, [value(n0, dens[0]), value(n1, dens[1])], missing)
        })
        .collect();
    let mut diag = Diagnostics::default();
    let mut points = Vec::new();
    let mut missing = 0;
    for (p, vals, m) in rows {
        missing += m;
        for (tag, v) in ["+", "-"].into_iter().zip(vals) {
            match v {
                Some(v) => points.push(tagged_point(cfg, tag, p, v)),
                None => diag.omitted_points.push((tag.into(), p)),
            }
        }
    }
    if missing > 0 {
        diag.excluded.push(format!("{missing} (record, prime) pairs had no a_p value"));
    }
    for (tag, root) in [("+", 1), ("-", -1)] {
        if !points.iter().any(|p| p.class_tag == tag) {
            diag.tag_errors.insert(tag.into(), format!("no records with root number {root} in [{}, {}]", cfg.x, cfg.upper()));
            diag.omitted_points.retain(|(t, _)| t != tag);
        }
    }
    if points.is_empty() {
        return Err(ExperimentError::Domain(format!("no records in [{}, {}]", cfg.x, cfg.upper())));
    }
    Ok(Series::new(cfg.clone(), points, diag))
}

/// p^{1−k/2} Σ' √N Σ a_p / Σ' #F(N), tag "all".
pub fn data_no_root_series<R: FormSource>(ds: &Dataset<R>, cfg: &ExperimentConfig) -> Result<Series, ExperimentError> {
    let records = selected(ds, cfg)?;
    let primes = axis(ds, cfg);
    let raw: Vec<(u64, Option<Exact>)> = primes
        .par_iter()
        .enumerate()
        .map(|(idx, &p)| {
            let mut per_level: BTreeMap<u64, BigRational> = BTreeMap::new();
            let mut den = 0u64;
            for r in records.iter().filter(|r| !cfg.coprime || r.level() % p != 0) {
                if let Some(a) = r.ap(p, idx) {
                    *per_level.entry(r.level()).or_insert_with(BigRational::zero) += normalization(p, r.weight()) * BigInt::from(a);
                    den += r.multiplicity();
                }
            }
            let num = per_level.into_iter().fold(SurdSum::zero(), |acc, (n, c)| acc.add(&SurdSum::sqrt_term(c, n)));
            (p, Exact::new(num, SurdSum::integer(den)))
        })
        .collect();
    let mut diag = Diagnostics::default();
    let mut points = Vec::new();
    for (p, v) in raw {
        match v {
            Some(v) => points.push(tagged_point(cfg, "all", p, v)),
            None => diag.omitted_points.push(("all".into(), p)),
        }
    }
    if points.is_empty() {
        return Err(ExperimentError::Domain(format!("no records in [{}, {}]", cfg.x, cfg.upper())));
    }
    Ok(Series::new(cfg.clone(), points, diag))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlMode {
    /// Levels p0·q with q prime, p0 < q, q in [X, βX].
    FixedSmallPrime(u64),
    /// Levels pq in [X, βX].
    BothVary,
}

const AL_TAGS: [&str; 4] = ["++", "+-", "-+", "--"];

fn al_records<'a>(
    ds: &'a Dataset<NewformRecord>,
    cfg: &ExperimentConfig,
    mode: AlMode,
) -> Result<Vec<(&'a NewformRecord, &'static str)>, ExperimentError> {
    cfg.validate()?;
    let candidates: Vec<&NewformRecord> = match mode {
        AlMode::FixedSmallPrime(p0) => {
            if !is_prime_u64(p0) {
                return Err(ExperimentError::Config(format!("fixed prime {p0} is not prime")));
            }
            ds.records()
                .iter()
                .filter(|r| r.level % p0 == 0 && (cfg.x..=cfg.upper()).contains(&(r.level / p0)))
                .collect()
        }
        AlMode::BothVary => ds.in_range(cfg.x, cfg.upper()).collect(),
    };
    let mut out = Vec::with_capacity(candidates.len());
    for r in candidates {
        let pat = r.sign_pattern().ok_or_else(|| {
            ExperimentError::Validation(format!("record {}.{} is not at a level pq", r.level, r.orbit_label))
        })?;
        if let AlMode::FixedSmallPrime(p0) = mode {
            if r.level / p0 <= p0 {
                return Err(ExperimentError::Validation(format!(
                    "record {}.{}: level is not {p0}·q with q > {p0}",
                    r.level, r.orbit_label
                )));
            }
        }
        out.push((r, pat.tag()));
    }
    Ok(out)
}

/// Normalized a_ℓ numerators at one prime ℓ, split by eigenspace and by
/// global root number.
#[derive(Debug, Clone, PartialEq)]
pub struct AlNumerators {
    pub by_class: BTreeMap<&'static str, BigRational>,
    pub by_global_root: BTreeMap<i8, BigRational>,
    pub total: BigRational,
    pub dims: BTreeMap<&'static str, u64>,
}

fn al_numerators_at(records: &[(&NewformRecord, &'static str)], cfg: &ExperimentConfig, ell: u64, idx: usize) -> AlNumerators {
    let mut out = AlNumerators {
        by_class: AL_TAGS.iter().map(|&t| (t, BigRational::zero())).collect(),
        by_global_root: [(1, BigRational::zero()), (-1, BigRational::zero())].into_iter().collect(),
        total: BigRational::zero(),
        dims: AL_TAGS.iter().map(|&t| (t, 0)).collect(),
    };
    for &(r, tag) in records.iter().filter(|(r, _)| !cfg.coprime || r.level % ell != 0) {
        let Some(a) = r.ap(ell, idx) else { continue };
        let v = normalization(ell, r.weight) * BigInt::from(a);
        *out.by_class.get_mut(tag).unwrap() += &v;
        *out.by_global_root.get_mut(&r.global_root).unwrap() += &v;
        out.total += v;
        *out.dims.get_mut(tag).unwrap() += r.orbit_dim;
    }
    out
}

pub fn al_class_numerators(
    ds: &Dataset<NewformRecord>,
    cfg: &ExperimentConfig,
    mode: AlMode,
    ell: u64,
) -> Result<AlNumerators, ExperimentError> {
    let records = al_records(ds, cfg, mode)?;
    let idx = primes_up_to(ell)
        .iter()
        .position(|&q| q == ell)
        .ok_or_else(|| ExperimentError::Domain(format!("{ell} is not prime")))?;
    Ok(al_numerators_at(&records, cfg, ell, idx))
}

/// Averages of normalized a_ℓ over each Atkin–Lehner eigenspace, tagged by
/// the local root numbers (w_p, w_q), p < q.
pub fn al_eigenspace_series(ds: &Dataset<NewformRecord>, cfg: &ExperimentConfig, mode: AlMode) -> Result<Series, ExperimentError> {
    let records = al_records(ds, cfg, mode)?;
    let primes = axis(ds, cfg);
    let rows: Vec<(u64, AlNumerators)> = primes
        .par_iter()
        .enumerate()
        .map(|(idx, &ell)| (ell, al_numerators_at(&records, cfg, ell, idx)))
        .collect();
    let mut diag = Diagnostics::default();
    let mut points = Vec::new();
    for (ell, nums) in rows {
        for tag in AL_TAGS {
            let d = nums.dims[tag];
            if d == 0 {
                diag.omitted_points.push((tag.into(), ell));
            } else {
                points.push(tagged_point(cfg, tag, ell, Exact::from_rational(nums.by_class[tag].clone() / BigInt::from(d))));
            }
        }
    }
    for tag in AL_TAGS {
        if !points.iter().any(|p| p.class_tag == tag) {
            diag.tag_errors.insert(tag.into(), "empty eigenspace in range".into());
            diag.omitted_points.retain(|(t, _)| t != tag);
        }
    }
    if points.is_empty() {
        return Err(ExperimentError::Domain("no records at levels pq in range".into()));
    }
    Ok(Series::new(cfg.clone(), points, diag))
}
