//! Character sums over classes of imaginary quadratic discriminants.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::{Diagnostics, Exact, ExperimentConfig, ExperimentError, Series, SeriesPoint, SurdSum};
use crate::arith::{classify_discriminant, is_fundamental_discriminant, kronecker, DiscriminantClass, Factorization};
use crate::quadforms::unit_index;

/// D in [X, βX] with −D in the given class.
pub fn bqf_discriminants(class: DiscriminantClass, cfg: &ExperimentConfig) -> Vec<u64> {
    (cfg.x..=cfg.upper()).filter(|&d| classify_discriminant(d) == class).collect()
}

/// (1/√X) Σ_{D} χ_{−D}(p) over D in [X, βX] of the class, coprime to p.
pub fn bqf_series(class: DiscriminantClass, cfg: &ExperimentConfig) -> Result<Series, ExperimentError> {
    cfg.validate()?;
    if class == DiscriminantClass::NotClassified {
        return Err(ExperimentError::Config("choose one of the four discriminant classes".into()));
    }
    let ds = bqf_discriminants(class, cfg);
    let root_x = SurdSum::sqrt_term(BigRational::from_integer(BigInt::from(1)), cfg.x);
    let points = cfg
        .primes()
        .par_iter()
        .map(|&p| {
            let mut sum = 0i64;
            for &d in ds.iter().filter(|&&d| d % p != 0) {
                sum += kronecker(-(d as i64), p as i64)? as i64;
            }
            let value = Exact::new(SurdSum::integer(sum), root_x.clone()).expect("X ≥ 2");
            Ok(SeriesPoint { x: p, x_scaled: cfg.scaled(p), value, class_tag: class.tag().to_string() })
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    Ok(Series::new(cfg.clone(), points, Diagnostics::default()))
}

/// Total representations of n by the reduced forms of discriminant −D:
/// 2·u_D·Σ_{d | n} χ_{−D}(d).
pub fn representation_count(d: u64, n: u64) -> Result<u64, ExperimentError> {
    let disc = -(d as i64);
    if !is_fundamental_discriminant(disc) {
        return Err(ExperimentError::Domain(format!("-{d} is not a fundamental discriminant")));
    }
    if n == 0 {
        return Err(ExperimentError::Domain("n must be positive".into()));
    }
    let mut sum = 0i64;
    for m in Factorization::trial_division(n).divisors() {
        sum += kronecker(disc, m as i64)? as i64;
    }
    Ok(2 * unit_index(d) as u64 * sum as u64)
}
