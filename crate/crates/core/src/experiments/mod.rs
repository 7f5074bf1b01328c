//! Murmuration averages: series over a prime or discriminant axis with
//! exact accumulation, class tags, smoothing and slope fits.

mod bqf;
mod classnum;
mod data;
mod exact;
mod lvalues;
mod modular;

pub use bqf::{bqf_discriminants, bqf_series, representation_count};
pub use classnum::class_sum_series;
pub use data::{
    al_class_numerators, al_eigenspace_series, data_fixed_root_series, data_no_root_series, AlMode, AlNumerators,
    FormSource,
};
pub use exact::{Exact, SurdSum};
pub use lvalues::{lambda_mr, lvalue_series, mr_terms, LValueMode, MrTerms};
pub use modular::{mf_delta_series, mf_no_root_series, mobius_part, mobius_series, mobius_slope_sweep, MobiusPart};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{kronecker, primes_up_to, ArithError, DiscriminantClass, FactorTable, XiPolicy};
use crate::ingest::IngestError;
use crate::traces::TraceError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("{terms} class-number terms over {pairs} (level, prime) pairs need the resolved xi policy (first at N = {}, p = {})", first.0, first.1)]
    UnresolvedXi { pairs: usize, terms: usize, first: (u64, u64) },
    #[error(transparent)]
    Trace(TraceError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
}

impl From<TraceError> for ExperimentError {
    fn from(e: TraceError) -> Self {
        match e {
            TraceError::Arith(a) => ExperimentError::Arith(a),
            other => ExperimentError::Trace(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    MfDelta,
    MfNoRoot,
    MfMobiusPart,
    MfFixedRootData,
    EcFixedRootData,
    EcNoRootData,
    AlEigenspace,
    ClassSum(u8),
    LvalueOverD,
    LvalueOverP,
    Bqf(DiscriminantClass),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelFilter {
    Squarefree,
    PrimesOnly,
    /// Primes inert in Q(√−D).
    InertPrimes(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub family: Family,
    pub x: u64,
    pub beta: Ratio<u64>,
    pub x_max_ratio: Ratio<u64>,
    pub weight: u32,
    pub level_filter: LevelFilter,
    pub coprime: bool,
    pub smoothing_window: usize,
    pub xi_policy: XiPolicy,
    /// Smallest level at which the L-value identity is evaluated.
    pub mr_min_level: u64,
}

impl ExperimentConfig {
    pub fn new(family: Family, x: u64) -> Self {
        ExperimentConfig {
            family,
            x,
            beta: Ratio::from_integer(2),
            x_max_ratio: Ratio::from_integer(4),
            weight: 2,
            level_filter: LevelFilter::Squarefree,
            coprime: true,
            smoothing_window: 0,
            xi_policy: XiPolicy::default(),
            mr_min_level: 11,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: &str| Err(ExperimentError::Config(m.into()));
        if self.x < 2 {
            return bad("X must be at least 2");
        }
        if self.beta <= Ratio::from_integer(1) {
            return bad("beta must exceed 1");
        }
        if self.x_max_ratio.is_zero() {
            return bad("x_max_ratio must be positive");
        }
        if self.weight < 2 || self.weight % 2 == 1 {
            return bad("weight must be an even integer ≥ 2");
        }
        if let Family::ClassSum(v) = self.family {
            if v > 4 {
                return bad("class-sum variant must be 0..=4");
            }
        }
        Ok(())
    }

    /// floor(βX).
    pub fn upper(&self) -> u64 {
        (self.beta * self.x).to_integer()
    }

    /// floor(x_max_ratio · X).
    pub fn x_max(&self) -> u64 {
        (self.x_max_ratio * self.x).to_integer()
    }

    pub fn scaled(&self, x: u64) -> Ratio<u64> {
        Ratio::new(x, self.x)
    }

    pub(crate) fn primes(&self) -> Vec<u64> {
        primes_up_to(self.x_max())
    }

    pub(crate) fn level_passes(&self, n: u64, factors: &FactorTable) -> Result<bool, ExperimentError> {
        if n < 2 {
            return Ok(false);
        }
        let fac = factors.factorize_any(n)?;
        Ok(match self.level_filter {
            LevelFilter::Squarefree => fac.is_squarefree(),
            LevelFilter::PrimesOnly => fac.pairs().len() == 1 && fac.pairs()[0].1 == 1,
            LevelFilter::InertPrimes(d) => {
                fac.pairs().len() == 1 && fac.pairs()[0].1 == 1 && kronecker(-(d as i64), n as i64)? == -1
            }
        })
    }

    /// Levels in [X, floor(βX)] passing the level filter.
    pub fn levels(&self, factors: &FactorTable) -> Result<Vec<u64>, ExperimentError> {
        let mut out = Vec::new();
        for n in self.x..=self.upper() {
            if self.level_passes(n, factors)? {
                out.push(n);
            }
        }
        Ok(out)
    }
}

/// Largest |argument| of H requested by a trace or class-sum family, so
/// callers can size a Hurwitz table. `None` for families that need none.
pub fn required_hurwitz_limit(cfg: &ExperimentConfig) -> Option<u64> {
    let n = cfg.upper() as u128;
    let p = cfg.x_max() as u128;
    let lim = match cfg.family {
        Family::MfDelta => 4 * n * p,
        Family::MfNoRoot | Family::MfMobiusPart => 4 * p,
        Family::ClassSum(0) | Family::ClassSum(1) => 4 * n * p,
        Family::ClassSum(2) => 3 * n * p,
        Family::ClassSum(3) => 4 * n * n * p,
        Family::ClassSum(_) => 4 * n * n * p + cfg.x.sqrt() as u128 * n,
        _ => return None,
    };
    Some(lim.min(u64::MAX as u128) as u64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesPoint {
    pub x: u64,
    pub x_scaled: Ratio<u64>,
    pub value: Exact,
    pub class_tag: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    /// (tag, x) pairs dropped because their denominator vanished.
    pub omitted_points: Vec<(String, u64)>,
    /// Human-readable notes on levels or records left out.
    pub excluded: Vec<String>,
    /// Tags that produced no points at all, with the reason.
    pub tag_errors: BTreeMap<String, String>,
}

impl Diagnostics {
    pub fn is_empty(&self) -> bool {
        self.omitted_points.is_empty() && self.excluded.is_empty() && self.tag_errors.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    pub config: ExperimentConfig,
    pub points: Vec<SeriesPoint>,
    pub diagnostics: Diagnostics,
}

impl Series {
    /// Sorts points by (tag, x).
    pub fn new(config: ExperimentConfig, mut points: Vec<SeriesPoint>, diagnostics: Diagnostics) -> Self {
        points.sort_by(|a, b| (&a.class_tag, a.x).cmp(&(&b.class_tag, b.x)));
        Series { config, points, diagnostics }
    }

    pub fn tags(&self) -> Vec<&str> {
        let mut tags: Vec<&str> = self.points.iter().map(|p| p.class_tag.as_str()).collect();
        tags.dedup();
        tags
    }

    pub fn class<'a>(&'a self, tag: &'a str) -> impl Iterator<Item = &'a SeriesPoint> + 'a {
        self.points.iter().filter(move |p| p.class_tag == tag)
    }

    pub fn value_at(&self, tag: &str, x: u64) -> Option<&Exact> {
        self.points.iter().find(|p| p.class_tag == tag && p.x == x).map(|p| &p.value)
    }
}

/// Replaces every point by the mean of the points within `window` places of
/// it in the same tag, truncated at the ends.
pub fn smooth(series: &Series, window: usize) -> Series {
    if window == 0 {
        return series.clone();
    }
    let mut out = Vec::with_capacity(series.points.len());
    for tag in series.tags() {
        let pts: Vec<&SeriesPoint> = series.class(tag).collect();
        for i in 0..pts.len() {
            let lo = i.saturating_sub(window);
            let hi = (i + window).min(pts.len() - 1);
            let sum = pts[lo + 1..=hi].iter().fold(pts[lo].value.clone(), |acc, p| acc.add(&p.value));
            let mean = sum.scale(&BigRational::new(BigInt::from(1), BigInt::from(hi - lo + 1)));
            out.push(SeriesPoint { value: mean, ..pts[i].clone() });
        }
    }
    Series::new(series.config.clone(), out, series.diagnostics.clone())
}

/// Exact least-squares slope of value against x over points with x in
/// `x_range` (all points when `None`).
pub fn fit_slope(series: &Series, x_range: Option<(u64, u64)>) -> Result<Exact, ExperimentError> {
    let pts: Vec<&SeriesPoint> = series
        .points
        .iter()
        .filter(|p| x_range.is_none_or(|(lo, hi)| (lo..=hi).contains(&p.x)))
        .collect();
    if pts.len() < 2 {
        return Err(ExperimentError::Domain(format!("slope fit needs at least 2 points, found {}", pts.len())));
    }
    let n = BigInt::from(pts.len());
    let sx: BigInt = pts.iter().map(|p| BigInt::from(p.x)).sum();
    let sxx: BigInt = pts.iter().map(|p| BigInt::from(p.x) * BigInt::from(p.x)).sum();
    let den = &n * &sxx - &sx * &sx;
    if den.is_zero() {
        return Err(ExperimentError::Domain("slope fit needs two distinct x values".into()));
    }
    let mut acc = Exact::from_integer(0);
    for p in &pts {
        let w = BigRational::new(&n * BigInt::from(p.x) - &sx, den.clone());
        acc = acc.add(&p.value.scale(&w));
    }
    Ok(acc)
}
