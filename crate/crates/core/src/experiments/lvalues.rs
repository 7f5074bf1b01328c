//! Central L-value averages through the relative trace formula for
//! N prime inert in Q(√−D).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::{Diagnostics, Exact, ExperimentConfig, ExperimentError, Series, SeriesPoint};
use crate::arith::{divisor_count, ideal_count, is_fundamental_discriminant, is_prime_u64, kronecker, primes_up_to, sigma_coprime, FactorTable};
use crate::quadforms::class_number_fund;

/// The three right-hand terms of the identity for (√D u_D²/2π)·Λ(N, 2, D, n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MrTerms {
    /// 12 h_D² σ_N(n) / (N − 1).
    pub eisenstein: BigRational,
    /// u_D r(nD) h_D.
    pub middle: BigRational,
    /// u_D² Σ_{m=1}^{⌊nD/N⌋} d(gcd(m, D)) r(m) r(nD − mN).
    pub phi_sum: BigRational,
}

impl MrTerms {
    pub fn total(&self) -> BigRational {
        &self.eisenstein + &self.middle + &self.phi_sum
    }
}

fn check(level: u64, d: u64, n: u64) -> Result<(), ExperimentError> {
    if d % 4 != 3 || !is_fundamental_discriminant(-(d as i64)) {
        return Err(ExperimentError::Domain(format!("need 0 < D ≡ 3 (mod 4) with −D fundamental, got D = {d}")));
    }
    if !is_prime_u64(level) {
        return Err(ExperimentError::Domain(format!("level {level} is not prime")));
    }
    if kronecker(-(d as i64), level as i64)? != -1 {
        return Err(ExperimentError::Domain(format!("{level} is not inert in Q(√−{d})")));
    }
    if n == 0 || n % level == 0 {
        return Err(ExperimentError::Domain(format!("n = {n} must be positive and prime to N = {level}")));
    }
    Ok(())
}

fn terms_with(level: u64, d: u64, n: u64, h: u64, u: u64, factors: &FactorTable) -> Result<MrTerms, ExperimentError> {
    let big = |v: u64| BigInt::from(v);
    let eisenstein = BigRational::new(big(12 * h * h) * big(sigma_coprime(n, level)), big(level - 1));
    let middle = BigRational::from_integer(big(u * ideal_count(n * d, d, factors)? * h));
    let mut phi = BigInt::zero();
    for m in 1..=(n * d) / level {
        let r1 = ideal_count(m, d, factors)?;
        if r1 == 0 {
            continue;
        }
        let r2 = ideal_count(n * d - m * level, d, factors)?;
        phi += big(divisor_count(num_integer::gcd(m, d)) * r1 * r2);
    }
    Ok(MrTerms { eisenstein, middle, phi_sum: BigRational::from_integer(phi * big(u * u)) })
}

pub fn mr_terms(level: u64, d: u64, n: u64, factors: &FactorTable) -> Result<MrTerms, ExperimentError> {
    check(level, d, n)?;
    let (h, u) = class_number_fund(d).map_err(|e| ExperimentError::Domain(e.to_string()))?;
    terms_with(level, d, n, h, u as u64, factors)
}

/// Λ̃(N, D, n) = (√D u_D²/2π)·Λ(N, 2, D, n), exact.
pub fn lambda_mr(level: u64, d: u64, n: u64, factors: &FactorTable) -> Result<BigRational, ExperimentError> {
    Ok(mr_terms(level, d, n, factors)?.total())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LValueMode {
    /// Λ̃(N, D, 1) averaged over N, as a function of prime D ≡ 3 (mod 4).
    OverD,
    /// Λ̃(N, 3, p) averaged over N, as a function of p.
    OverP,
}

fn inert_levels(cfg: &ExperimentConfig, d: u64) -> Result<Vec<u64>, ExperimentError> {
    let lo = cfg.x.max(cfg.mr_min_level);
    let mut out = Vec::new();
    for n in lo..=cfg.upper() {
        if is_prime_u64(n) && kronecker(-(d as i64), n as i64)? == -1 {
            out.push(n);
        }
    }
    Ok(out)
}

fn average(vals: Vec<BigRational>) -> Option<Exact> {
    let count = vals.len();
    (count > 0).then(|| Exact::from_rational(vals.into_iter().sum::<BigRational>() / BigInt::from(count)))
}

pub fn lvalue_series(mode: LValueMode, cfg: &ExperimentConfig, factors: &FactorTable) -> Result<Series, ExperimentError> {
    cfg.validate()?;
    let rows: Vec<(u64, &'static str, Option<Exact>)> = match mode {
        LValueMode::OverD => {
            let ds: Vec<u64> = primes_up_to(cfg.x).into_iter().filter(|&d| d > 3 && d % 4 == 3).collect();
            ds.par_iter()
                .map(|&d| {
                    let (h, u) = class_number_fund(d).map_err(|e| ExperimentError::Domain(e.to_string()))?;
                    let vals = inert_levels(cfg, d)?
                        .into_iter()
                        .map(|n| Ok(terms_with(n, d, 1, h, u as u64, factors)?.total()))
                        .collect::<Result<Vec<_>, ExperimentError>>()?;
                    let tag = if (8 - d % 8) % 8 == 1 { "1mod8" } else { "5mod8" };
                    Ok((d, tag, average(vals)))
                })
                .collect::<Result<Vec<_>, ExperimentError>>()?
        }
        LValueMode::OverP => {
            let levels = inert_levels(cfg, 3)?;
            cfg.primes()
                .into_iter()
                .filter(|&p| p != 3)
                .collect::<Vec<_>>()
                .par_iter()
                .map(|&p| {
                    let vals = levels
                        .iter()
                        .filter(|&&n| n != p)
                        .map(|&n| Ok(terms_with(n, 3, p, 1, 3, factors)?.total()))
                        .collect::<Result<Vec<_>, ExperimentError>>()?;
                    let tag = if kronecker(-3, p as i64)? == 1 { "split" } else { "inert" };
                    Ok((p, tag, average(vals)))
                })
                .collect::<Result<Vec<_>, ExperimentError>>()?
        }
    };
    let mut diag = Diagnostics::default();
    let mut points = Vec::new();
    for (x, tag, v) in rows {
        match v {
            Some(value) => points.push(SeriesPoint { x, x_scaled: cfg.scaled(x), value, class_tag: tag.into() }),
            None => diag.omitted_points.push((tag.into(), x)),
        }
    }
    if points.is_empty() {
        return Err(ExperimentError::Domain(format!("no qualifying prime levels in [{}, {}]", cfg.x, cfg.upper())));
    }
    Ok(Series::new(cfg.clone(), points, diag))
}
