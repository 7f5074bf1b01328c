//! Trace-formula averages over weight-2 newspaces of squarefree level.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::{fit_slope, Diagnostics, Exact, ExperimentConfig, ExperimentError, Family, Series, SeriesPoint, SurdSum};
use crate::traces::{dim_new, tr_tp, tr_w_tp, TraceContext, TraceError};

struct Level {
    n: u64,
    dim: u64,
    mu: i8,
}

fn trace_levels(cfg: &ExperimentConfig, ctx: &TraceContext) -> Result<Vec<Level>, ExperimentError> {
    cfg.validate()?;
    if cfg.weight != 2 {
        return Err(ExperimentError::Config("trace-formula families are weight 2 only".into()));
    }
    let mut out = Vec::new();
    for n in cfg.levels(&ctx.factors)? {
        let fac = ctx.factors.factorize_any(n)?;
        if !fac.is_squarefree() {
            continue;
        }
        out.push(Level { n, dim: dim_new(n)?, mu: fac.mobius() });
    }
    Ok(out)
}

fn point(cfg: &ExperimentConfig, tag: &str, x: u64, value: Exact) -> SeriesPoint {
    SeriesPoint { x, x_scaled: cfg.scaled(x), value, class_tag: tag.to_string() }
}

fn finish(cfg: &ExperimentConfig, tag: &str, raw: Vec<(u64, Option<Exact>)>) -> Result<Series, ExperimentError> {
    let mut diag = Diagnostics::default();
    let mut points = Vec::new();
    for (p, v) in raw {
        match v {
            Some(v) => points.push(point(cfg, tag, p, v)),
            None => diag.omitted_points.push((tag.to_string(), p)),
        }
    }
    if points.is_empty() {
        return Err(ExperimentError::Domain(format!(
            "no level in [{}, {}] has a nonzero newspace dimension",
            cfg.x,
            cfg.upper()
        )));
    }
    Ok(Series::new(cfg.clone(), points, diag))
}

/// B(p, X) = Σ' tr W T_p / Σ' dim S_2^new(N); the root-number difference
/// average is approximately 2B.
pub fn mf_delta_series(cfg: &ExperimentConfig, ctx: &TraceContext) -> Result<Series, ExperimentError> {
    let levels = trace_levels(cfg, ctx)?;
    let raw = cfg
        .primes()
        .par_iter()
        .map(|&p| {
            let mut num = 0i64;
            let mut den = 0u64;
            for l in levels.iter().filter(|l| l.n % p != 0) {
                num += tr_w_tp(l.n, p, ctx)?;
                den += l.dim;
            }
            Ok((p, Exact::ratio(num, den)))
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    finish(cfg, "delta", raw)
}

/// (pairs, terms, first level) left unresolved under the strict ξ policy.
type Unresolved = (usize, usize, u64);

/// Per-prime numerator Σ' √N tr T_p and denominator Σ' dim, or the count of
/// unresolved terms and the first offending level.
fn no_root_parts(
    levels: &[Level],
    p: u64,
    ctx: &TraceContext,
    cfg: &ExperimentConfig,
) -> Result<Result<(SurdSum, u64), Unresolved>, ExperimentError> {
    let mut weights = Vec::new();
    let mut den = 0u64;
    let (mut pairs, mut terms, mut first) = (0usize, 0usize, None);
    for l in levels.iter().filter(|l| l.n % p != 0) {
        match tr_tp(l.n, p, ctx, cfg.xi_policy) {
            Ok(t) => weights.push((l.n, t as i128)),
            Err(TraceError::UnresolvedXi { terms: t, .. }) => {
                pairs += 1;
                terms += t.len();
                first.get_or_insert(l.n);
            }
            Err(e) => return Err(e.into()),
        }
        den += l.dim;
    }
    Ok(match first {
        Some(n) => Err((pairs, terms, n)),
        None => Ok((SurdSum::from_sqrt_weights(weights), den)),
    })
}

/// A(p, X) = Σ' √N tr T_p / Σ' dim S_2^new(N).
pub fn mf_no_root_series(cfg: &ExperimentConfig, ctx: &TraceContext) -> Result<Series, ExperimentError> {
    let levels = trace_levels(cfg, ctx)?;
    let parts = cfg
        .primes()
        .par_iter()
        .map(|&p| Ok((p, no_root_parts(&levels, p, ctx, cfg)?)))
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    let (mut pairs, mut terms, mut first) = (0, 0, None);
    let mut raw = Vec::new();
    for (p, part) in parts {
        match part {
            Ok((num, den)) => raw.push((p, Exact::new(num, SurdSum::integer(den)))),
            Err((pa, te, n)) => {
                pairs += pa;
                terms += te;
                first.get_or_insert((n, p));
            }
        }
    }
    if let Some(first) = first {
        return Err(ExperimentError::UnresolvedXi { pairs, terms, first });
    }
    finish(cfg, "no-root", raw)
}

pub struct MobiusPart {
    pub mobius: Series,
    pub class_part: Series,
    pub approx: Series,
}

fn mobius_weights(levels: &[Level], p: u64) -> (SurdSum, u64) {
    let live = levels.iter().filter(|l| l.n % p != 0);
    let den = live.clone().map(|l| l.dim).sum();
    (SurdSum::from_sqrt_weights(live.map(|l| (l.n, l.mu as i128))), den)
}

/// (p + 1) Σ' √N μ(N) / Σ' dim S_2^new(N), with the same coprimality
/// restriction as the trace averages.
pub fn mobius_series(cfg: &ExperimentConfig, ctx: &TraceContext) -> Result<Series, ExperimentError> {
    let levels = trace_levels(cfg, ctx)?;
    let raw = cfg
        .primes()
        .par_iter()
        .map(|&p| {
            let (w, den) = mobius_weights(&levels, p);
            let num = w.scale(&BigRational::from_integer(BigInt::from(p + 1)));
            (p, Exact::new(num, SurdSum::integer(den)))
        })
        .collect();
    finish(cfg, "mobius", raw)
}

/// Splits the no-root average into the Möbius term and the class-number
/// remainder; `approx` is (p/X²) Σ' √N μ(N).
pub fn mobius_part(cfg: &ExperimentConfig, ctx: &TraceContext) -> Result<MobiusPart, ExperimentError> {
    let no_root = mf_no_root_series(cfg, ctx)?;
    let mobius = mobius_series(cfg, ctx)?;
    let levels = trace_levels(cfg, ctx)?;
    let mut class_points = Vec::new();
    for m in &mobius.points {
        if let Some(total) = no_root.value_at("no-root", m.x) {
            class_points.push(point(cfg, "class", m.x, total.sub(&m.value)));
        }
    }
    let x2 = BigInt::from(cfg.x) * BigInt::from(cfg.x);
    let approx_points = cfg
        .primes()
        .into_iter()
        .map(|p| {
            let (w, _) = mobius_weights(&levels, p);
            let scaled = w.scale(&BigRational::new(BigInt::from(p), x2.clone()));
            point(cfg, "approx", p, Exact::new(scaled, SurdSum::integer(1)).unwrap())
        })
        .collect();
    Ok(MobiusPart {
        class_part: Series::new(cfg.clone(), class_points, mobius.diagnostics.clone()),
        approx: Series::new(cfg.clone(), approx_points, Diagnostics::default()),
        mobius,
    })
}

/// Slope in p of the Möbius series for each X in `xs`; one point per X.
pub fn mobius_slope_sweep(cfg: &ExperimentConfig, ctx: &TraceContext, xs: &[u64]) -> Result<Series, ExperimentError> {
    let mut points = Vec::new();
    for &x in xs {
        let sub = ExperimentConfig { x, family: Family::MfMobiusPart, ..cfg.clone() };
        let slope = fit_slope(&mobius_series(&sub, ctx)?, None)?;
        points.push(SeriesPoint { x, x_scaled: cfg.scaled(x), value: slope, class_tag: "slope".into() });
    }
    Ok(Series::new(cfg.clone(), points, Diagnostics::default()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{build_factor_table, XiPolicy};
    use num_rational::Ratio;

    fn ctx() -> TraceContext {
        TraceContext::new(build_factor_table(100_000).unwrap(), None)
    }

    fn cfg(family: Family, x: u64, hi: u64) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(family, x);
        c.beta = Ratio::new(hi * 2 + 1, 2 * x);
        c.xi_policy = XiPolicy::Resolved;
        c
    }

    #[test]
    fn delta_single_level() {
        let s = mf_delta_series(&cfg(Family::MfDelta, 11, 11), &ctx()).unwrap();
        assert_eq!(s.value_at("delta", 2), Some(&Exact::from_integer(-2)));
        assert_eq!(s.diagnostics.omitted_points, vec![("delta".to_string(), 11)]);
        assert!(mf_delta_series(&cfg(Family::MfDelta, 13, 13), &ctx()).is_err());
    }

    #[test]
    fn delta_positive_at_first_prime() {
        let cfg = ExperimentConfig::new(Family::MfDelta, 250);
        let limit = crate::experiments::required_hurwitz_limit(&cfg).unwrap();
        let c = TraceContext::new(build_factor_table(10_000).unwrap(), Some(crate::quadforms::build_hurwitz_table(limit).unwrap()));
        let s = mf_delta_series(&cfg, &c).unwrap();
        let first = &s.points[0];
        assert_eq!(first.x, 2);
        assert!(first.value.to_f64() > 0.0);
        assert_eq!(s.points.len(), crate::arith::primes_up_to(1000).len());
    }

    #[test]
    fn no_root_small_range() {
        let c = cfg(Family::MfNoRoot, 10, 20);
        let s = mf_no_root_series(&c, &ctx()).unwrap();
        let v = s.value_at("no-root", 2).unwrap();
        let expected = -(2.0 * 11f64.sqrt() + 15f64.sqrt() + 17f64.sqrt()) / 4.0;
        assert!((v.to_f64() - expected).abs() < 1e-12);
        assert!((v.to_f64() + 3.6573).abs() < 1e-4);
        assert!(mf_no_root_series(&cfg(Family::MfNoRoot, 13, 13), &ctx()).is_err());
    }

    #[test]
    fn strict_policy_reports_counts() {
        let mut c = cfg(Family::MfNoRoot, 10, 20);
        c.xi_policy = XiPolicy::StrictPartial;
        match mf_no_root_series(&c, &ctx()) {
            Err(ExperimentError::UnresolvedXi { pairs, terms, first }) => {
                assert!(pairs > 0 && terms >= pairs);
                assert_eq!(first.0 % 2, 0);
            }
            other => panic!("expected unresolved xi, got {other:?}"),
        }
    }

    #[test]
    fn mobius_worked_value_and_decomposition() {
        let c = cfg(Family::MfMobiusPart, 10, 20);
        let parts = mobius_part(&c, &ctx()).unwrap();
        let m = parts.mobius.value_at("mobius", 23).unwrap().to_f64();
        let direct = 24.0 * [10u64, 11, 13, 14, 15, 17, 19]
            .iter()
            .map(|&n| (n as f64).sqrt() * crate::arith::Factorization::trial_division(n).mobius() as f64)
            .sum::<f64>()
            / 5.0;
        assert!((m - direct).abs() < 1e-10);
        assert!((m + 22.21).abs() < 0.01, "{m}");
        let no_root = mf_no_root_series(&c, &ctx()).unwrap();
        for pt in &no_root.points {
            let sum = parts.mobius.value_at("mobius", pt.x).unwrap().add(parts.class_part.value_at("class", pt.x).unwrap());
            assert_eq!(sum, pt.value, "p={}", pt.x);
        }
        // p = 5 drops 10 and 15 from both sums.
        let (w, den) = mobius_weights(&trace_levels(&c, &ctx()).unwrap(), 5);
        assert_eq!(den, 4);
        assert_eq!(w.terms().count(), 5);
    }

    #[test]
    fn slope_sweep_has_one_point_per_x() {
        let c = ExperimentConfig::new(Family::MfMobiusPart, 20);
        let s = mobius_slope_sweep(&c, &ctx(), &[20, 30, 40]).unwrap();
        assert_eq!(s.points.iter().map(|p| p.x).collect::<Vec<_>>(), vec![20, 30, 40]);
    }
}
