//! Short sums of Hurwitz class numbers along polynomial families.

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use rayon::prelude::*;

use super::{Diagnostics, Exact, ExperimentConfig, ExperimentError, Series, SeriesPoint, SurdSum};
use crate::arith::Factorization;
use crate::quadforms::Twelfths;
use crate::traces::TraceContext;

fn arg(v: i128) -> Result<i64, ExperimentError> {
    i64::try_from(v).map_err(|_| ExperimentError::Resource(format!("class-number argument {v} exceeds 64 bits")))
}

/// Σ_{(s,t)} H(f(N, p, s, t)) for one level.
fn level_sum(variant: u8, n: u64, p: u64, t_max: u64, ctx: &TraceContext) -> Result<Twelfths, ExperimentError> {
    let (n, p) = (n as i128, p as i128);
    let mut acc = Twelfths::ZERO;
    match variant {
        0 => {
            for s in 0..=1i128 {
                acc += ctx.h(arg(s * s * n * n - 4 * n * p)?)?;
            }
        }
        1 => {
            for s in 0..=4i128 {
                acc += ctx.h(arg(s * s * p * p - 4 * n * p)?)?;
            }
        }
        2 => {
            for s in 0..=4i128 {
                acc += ctx.h(arg(s * s + 1 - 3 * n * p)?)?;
            }
        }
        3 => {
            for s in 0..=1i128 {
                acc += ctx.h(arg(s * n * n * n - 4 * n * n * p)?)?;
            }
        }
        _ => {
            for t in 1..=t_max as i128 {
                for s in 0..=1i128 {
                    acc += ctx.h(arg(s * s * n * n * n - t * n - 4 * n * n * p)?)?;
                }
            }
        }
    }
    Ok(acc)
}

/// A_v(p, X) for v = 0..=4 over squarefree N in [X, βX]:
/// v = 0: Σ_{s=0,1} H(s²N² − 4Np) / Σ N;
/// v = 1: Σ_{s=0..4} H(s²p² − 4Np) / Σ N;
/// v = 2: Σ_{s=0..4} H(s² + 1 − 3Np) / Σ N;
/// v = 3: Σ_{s=0,1} H(sN³ − 4N²p) / Σ N^{3/2};
/// v = 4: Σ_{t ≤ √X} Σ_{s=0,1} H(s²N³ − tN − 4N²p) / Σ_t Σ N^{3/2}.
pub fn class_sum_series(variant: u8, cfg: &ExperimentConfig, ctx: &TraceContext) -> Result<Series, ExperimentError> {
    cfg.validate()?;
    if variant > 4 {
        return Err(ExperimentError::Config(format!("class-sum variant {variant} is not in 0..=4")));
    }
    let mut levels = Vec::new();
    for n in cfg.levels(&ctx.factors)? {
        if Factorization::trial_division(n).is_squarefree() {
            levels.push(n);
        }
    }
    if levels.is_empty() {
        return Err(ExperimentError::Domain(format!("no squarefree levels in [{}, {}]", cfg.x, cfg.upper())));
    }
    let t_max = cfg.x.sqrt();
    let den = match variant {
        0..=2 => SurdSum::integer(levels.iter().sum::<u64>()),
        3 => SurdSum::from_sqrt_weights(levels.iter().map(|&n| (n, n as i128))),
        _ => SurdSum::from_sqrt_weights(levels.iter().map(|&n| (n, (n * t_max) as i128))),
    };
    let tag = format!("a{variant}");
    let points = cfg
        .primes()
        .par_iter()
        .map(|&p| {
            let mut acc = Twelfths::ZERO;
            for &n in &levels {
                acc += level_sum(variant, n, p, t_max, ctx)?;
            }
            let num = SurdSum::rational(BigRational::new(BigInt::from(acc.num12()), BigInt::from(12)));
            let value = Exact::new(num, den.clone()).expect("nonempty level set");
            Ok(SeriesPoint { x: p, x_scaled: cfg.scaled(p), value, class_tag: tag.clone() })
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    Ok(Series::new(cfg.clone(), points, Diagnostics::default()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::build_factor_table;
    use crate::experiments::Family;
    use num_rational::Ratio;

    fn single(x: u64) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(Family::ClassSum(0), x);
        c.beta = Ratio::new(2 * x + 1, 2 * x);
        c
    }

    fn ctx() -> TraceContext {
        TraceContext::new(build_factor_table(10_000).unwrap(), None)
    }

    #[test]
    fn variant_zero_worked_values() {
        let s = class_sum_series(0, &single(10), &ctx()).unwrap();
        assert_eq!(s.value_at("a0", 3), Some(&Exact::ratio(3, 5).unwrap()));
        let s = class_sum_series(0, &single(13), &ctx()).unwrap();
        assert_eq!(s.value_at("a0", 3), Some(&Exact::ratio(8, 13).unwrap()));
    }

    #[test]
    fn variant_three_positive_term_vanishes() {
        // p < N/4: only the s = 0 term survives.
        let c = ctx();
        let n = 101u64;
        for p in [2u64, 3, 5, 7, 23] {
            let both = level_sum(3, n, p, 0, &c).unwrap();
            let s0 = c.h(-(4 * n as i64 * n as i64 * p as i64)).unwrap();
            assert_eq!(both, s0, "p={p}");
        }
    }

    #[test]
    fn normalizers() {
        let cfg = single(10);
        let s = class_sum_series(3, &cfg, &ctx()).unwrap();
        let v = s.value_at("a3", 2).unwrap().to_f64();
        let h = |d: i64| crate::quadforms::hurwitz(d).to_ratio();
        let num = h(-800) + h(1000 - 800);
        let expected = (*num.numer() as f64 / *num.denom() as f64) / (10f64 * 10f64.sqrt());
        assert!((v - expected).abs() < 1e-12);
        let s4 = class_sum_series(4, &cfg, &ctx()).unwrap();
        assert!(s4.points.iter().all(|p| p.value.to_f64() >= 0.0));
        assert_eq!(s4.points.len(), crate::arith::primes_up_to(40).len());
    }
}
