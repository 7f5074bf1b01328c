//! Weight-2 newspace quantities at squarefree level: genus and newform
//! dimension, and the class-number trace formulas for T_p and for the
//! Fricke-signed W·T_p.

use num_rational::Ratio;
use thiserror::Error;

use crate::arith::{kronecker, xi, ArithError, FactorTable, Factorization, XiPolicy};
use crate::quadforms::{hurwitz_factored, HurwitzTable, Twelfths};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("hurwitz argument {disc} outside table limit {limit}")]
    TableTooSmall { disc: i64, limit: u64 },
    /// Terms (s, Δ) of tr T_p at level N that hit q² | Δ under the strict policy.
    #[error("tr T_{p} at level {level}: {} class-number terms need the resolved xi policy", terms.len())]
    UnresolvedXi { level: u64, p: u64, terms: Vec<(i64, i64)> },
}

/// Shared read-only tables for trace evaluation.
#[derive(Debug, Clone)]
pub struct TraceContext {
    pub factors: FactorTable,
    pub hurwitz: Option<HurwitzTable>,
}

impl TraceContext {
    pub fn new(factors: FactorTable, hurwitz: Option<HurwitzTable>) -> Self {
        TraceContext { factors, hurwitz }
    }

    /// H(disc) from the table when present, otherwise through the fundamental part.
    pub fn h(&self, disc: i64) -> Result<Twelfths, TraceError> {
        match &self.hurwitz {
            Some(t) => t.hurwitz(disc).ok_or(TraceError::TableTooSmall { disc, limit: t.limit() }),
            None => Ok(hurwitz_factored(disc, &self.factors)?),
        }
    }

    fn check_level_prime(&self, n: u64, p: u64) -> Result<Factorization, TraceError> {
        if n <= 1 {
            return Err(TraceError::Domain(format!("level must exceed 1, got {n}")));
        }
        let fac = self.factors.factorize_any(n)?;
        if !fac.is_squarefree() {
            return Err(TraceError::Domain(format!("level {n} is not squarefree")));
        }
        if !crate::arith::is_prime_u64(p) {
            return Err(TraceError::Domain(format!("{p} is not prime")));
        }
        if n % p == 0 {
            return Err(TraceError::Domain(format!("p = {p} divides level {n}")));
        }
        Ok(fac)
    }
}

/// Genus of X_0(N).
pub fn genus_x0(n: u64) -> u64 {
    assert!(n >= 1, "level must be positive");
    let fac = Factorization::trial_division(n);
    let index: u64 = fac.pairs().iter().map(|&(p, e)| p.pow(e - 1) * (p + 1)).product();
    let local = |disc: i64, square: u64| -> i64 {
        if n % square == 0 {
            0
        } else {
            fac.primes().map(|p| 1 + kronecker(disc, p as i64).unwrap() as i64).product()
        }
    };
    let nu2 = local(-4, 4);
    let nu3 = local(-3, 9);
    let cusps: u64 = fac
        .divisors()
        .into_iter()
        .map(|d| Factorization::trial_division(num_integer::gcd(d, n / d)).euler_phi())
        .sum();
    let twelve_g = 12 + index as i64 - 3 * nu2 - 4 * nu3 - 6 * cusps as i64;
    assert!(twelve_g >= 0 && twelve_g % 12 == 0, "genus formula gave 12g = {twelve_g} at N = {n}");
    (twelve_g / 12) as u64
}

/// dim S_2^new(N) for squarefree N, sieved from genera with c(q) = −2.
pub fn dim_new(n: u64) -> Result<u64, TraceError> {
    if n == 0 {
        return Err(TraceError::Domain("level must be positive".into()));
    }
    let fac = Factorization::trial_division(n);
    if !fac.is_squarefree() {
        return Err(TraceError::Domain(format!("level {n} is not squarefree")));
    }
    let mut total = 0i64;
    for d in fac.divisors() {
        let omega = Factorization::trial_division(d).omega() as u32;
        total += (-2i64).pow(omega) * genus_x0(n / d) as i64;
    }
    assert!(total >= 0, "negative newspace dimension at N = {n}");
    Ok(total as u64)
}

/// tr W T_p on S_2^new(N) = ½ Σ_{s² ≤ 4p/N} H(s²N² − 4Np) − (p + 1), s ∈ Z.
pub fn tr_w_tp(n: u64, p: u64, ctx: &TraceContext) -> Result<i64, TraceError> {
    ctx.check_level_prime(n, p)?;
    let (ni, pi) = (n as i64, p as i64);
    let mut sum = Twelfths::ZERO;
    let mut s = 0i64;
    while s * s * ni <= 4 * pi {
        let h = ctx.h(s * s * ni * ni - 4 * ni * pi)?;
        sum += if s == 0 { h } else { h * 2 };
        s += 1;
    }
    let num12 = sum.num12();
    assert!(num12 % 24 == 0, "tr W T_{p} at N = {n}: half-sum {num12}/24 is not integral");
    Ok(num12 / 24 - (pi + 1))
}

/// tr T_p on S_2^new(N) = −½ Σ_{s² ≤ 4p} ξ_{s²−4p}(N) H(s² − 4p) + μ(N)(p + 1).
pub fn tr_tp(n: u64, p: u64, ctx: &TraceContext, policy: XiPolicy) -> Result<i64, TraceError> {
    let fac = ctx.check_level_prime(n, p)?;
    let pi = p as i64;
    let mut sum = Ratio::from_integer(0i64);
    let mut unresolved: Vec<(i64, i64)> = Vec::new();
    let mut s = 0i64;
    while s * s <= 4 * pi {
        let delta = s * s - 4 * pi;
        let multiplicity = if s == 0 { 1 } else { 2 };
        if delta == 0 {
            // Not reachable for prime p; H(0) convention kept for completeness.
            let xi0 = Ratio::from_integer(fac.primes().map(|_| -1i64).product::<i64>());
            sum += xi0 * ctx.h(0)?.to_ratio() * multiplicity;
        } else {
            match xi(delta, n, &ctx.factors, policy) {
                Ok(x) => sum += x * ctx.h(delta)?.to_ratio() * multiplicity,
                Err(ArithError::UnresolvedXi { .. }) => {
                    unresolved.push((s, delta));
                    if s != 0 {
                        unresolved.push((-s, delta));
                    }
                }
                Err(e) => return Err(e.into()),
            }
        }
        s += 1;
    }
    if !unresolved.is_empty() {
        unresolved.sort_unstable();
        return Err(TraceError::UnresolvedXi { level: n, p, terms: unresolved });
    }
    let total = -sum / 2 + Ratio::from_integer(fac.mobius() as i64 * (pi + 1));
    assert!(total.is_integer(), "tr T_{p} at N = {n} evaluated to non-integer {total}");
    Ok(total.to_integer())
}
