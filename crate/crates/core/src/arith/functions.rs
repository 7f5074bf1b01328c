use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{kronecker, ArithError, FactorTable, Factorization};

/// How ξ_Δ(q) is evaluated at primes with q² | Δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum XiPolicy {
    /// Refuse: report the (Δ, q) pair so callers can count affected terms.
    #[default]
    StrictPartial,
    /// Closed-form local factor through the conductor of Δ.
    Resolved,
}

/// Filter classes for the binary-quadratic-form experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DiscriminantClass {
    Odd1Mod8,
    Odd5Mod8,
    Even1Mod4,
    Even3Mod4,
    NotClassified,
}

impl DiscriminantClass {
    pub fn tag(self) -> &'static str {
        match self {
            DiscriminantClass::Odd1Mod8 => "odd1mod8",
            DiscriminantClass::Odd5Mod8 => "odd5mod8",
            DiscriminantClass::Even1Mod4 => "even1mod4",
            DiscriminantClass::Even3Mod4 => "even3mod4",
            DiscriminantClass::NotClassified => "unclassified",
        }
    }
}

fn squarefree_trial(n: u64) -> bool {
    Factorization::trial_division(n).is_squarefree()
}

/// Classifies `−D` by residue: odd squarefree `D` by −D mod 8, and `D = 4d`
/// with `d` odd squarefree by d mod 4. The even branch keeps d ≡ 3 (mod 4)
/// even though −4d is then not fundamental.
pub fn classify_discriminant(d: u64) -> DiscriminantClass {
    if d < 3 {
        return DiscriminantClass::NotClassified;
    }
    if d % 2 == 1 {
        if !squarefree_trial(d) {
            return DiscriminantClass::NotClassified;
        }
        return match (8 - d % 8) % 8 {
            1 => DiscriminantClass::Odd1Mod8,
            5 => DiscriminantClass::Odd5Mod8,
            _ => DiscriminantClass::NotClassified,
        };
    }
    if d % 4 != 0 {
        return DiscriminantClass::NotClassified;
    }
    let q = d / 4;
    if q % 2 == 0 || !squarefree_trial(q) {
        return DiscriminantClass::NotClassified;
    }
    if q % 4 == 1 {
        DiscriminantClass::Even1Mod4
    } else {
        DiscriminantClass::Even3Mod4
    }
}

pub fn is_fundamental_discriminant(disc: i64) -> bool {
    if disc == 0 || disc == 1 {
        return false;
    }
    let m = disc.rem_euclid(4);
    if m == 1 {
        return squarefree_trial(disc.unsigned_abs());
    }
    if m == 0 {
        let q = disc / 4;
        return matches!(q.rem_euclid(4), 2 | 3) && squarefree_trial(q.unsigned_abs());
    }
    false
}

/// Splits a negative discriminant as Δ = Δ0·F² with Δ0 fundamental.
pub fn fundamental_part(delta: i64, table: &FactorTable) -> Result<(i64, u64), ArithError> {
    if delta >= 0 || !matches!(delta.rem_euclid(4), 0 | 1) {
        return Err(ArithError::Domain(format!("{delta} is not a negative discriminant")));
    }
    let fac = table.factorize_any(delta.unsigned_abs())?;
    let mut core = 1u64;
    let mut root = 1u64;
    for &(p, e) in fac.pairs() {
        if e % 2 == 1 {
            core *= p;
        }
        root *= p.pow(e / 2);
    }
    let neg_core = -(core as i64);
    if neg_core.rem_euclid(4) == 1 {
        Ok((neg_core, root))
    } else {
        debug_assert_eq!(root % 2, 0);
        Ok((4 * neg_core, root / 2))
    }
}

/// Local factor ξ_Δ(q).
///
/// With Δ = Δ0·F², a = v_q(F), χ0 = (Δ0/q), ψ(q^0) = 1 and
/// ψ(q^j) = q^{j−1}(q − χ0), S_i = Σ_{j≤i} ψ(q^j), the resolved value is
/// [(q−1)·S_{a−1} + ((Δ/q) − 1)·ψ(q^a)] / S_a, which reduces to (Δ/q) − 1
/// whenever q² ∤ Δ.
pub fn xi_local(delta: i64, q: u64, table: &FactorTable, policy: XiPolicy) -> Result<Ratio<i64>, ArithError> {
    let chi = kronecker(delta, q as i64)? as i64;
    let qq = (q as i128) * (q as i128);
    if (delta as i128) % qq != 0 {
        return Ok(Ratio::from_integer(chi - 1));
    }
    if policy == XiPolicy::StrictPartial {
        return Err(ArithError::UnresolvedXi { delta, q });
    }
    let (delta0, conductor) = fundamental_part(delta, table)?;
    let mut a = 0u32;
    let mut f = conductor;
    while f % q == 0 {
        f /= q;
        a += 1;
    }
    let q_i = q as i64;
    let chi0 = kronecker(delta0, q_i)? as i64;
    let psi = |j: u32| -> i64 {
        if j == 0 {
            1
        } else {
            q_i.pow(j - 1) * (q_i - chi0)
        }
    };
    let s = |i: u32| -> i64 { (0..=i).map(psi).sum() };
    let mut num = (chi - 1) * psi(a);
    if a >= 1 {
        num += (q_i - 1) * s(a - 1);
    }
    Ok(Ratio::new(num, s(a)))
}

/// ξ_Δ(N) for squarefree N, the product of local factors.
pub fn xi(delta: i64, n: u64, table: &FactorTable, policy: XiPolicy) -> Result<Ratio<i64>, ArithError> {
    if delta >= 0 || !matches!(delta.rem_euclid(4), 0 | 1) {
        return Err(ArithError::Domain(format!("{delta} is not a negative discriminant")));
    }
    let fac = table.factorize(n)?;
    if !fac.is_squarefree() {
        return Err(ArithError::Domain(format!("xi needs squarefree N, got {n}")));
    }
    let mut acc = Ratio::from_integer(1i64);
    for q in fac.primes() {
        acc *= xi_local(delta, q, table, policy)?;
    }
    Ok(acc)
}

/// Σ of divisors d | n with gcd(d, N) = 1.
pub fn sigma_coprime(n: u64, big_n: u64) -> u64 {
    Factorization::trial_division(n)
        .pairs()
        .iter()
        .filter(|&&(p, _)| big_n % p != 0)
        .map(|&(p, e)| (0..=e).map(|k| p.pow(k)).sum::<u64>())
        .product()
}

pub fn divisor_count(n: u64) -> u64 {
    Factorization::trial_division(n).divisor_count()
}

/// Number of ideals of norm `m` in the ring of integers of Q(√−D).
pub fn ideal_count(m: u64, d: u64, table: &FactorTable) -> Result<u64, ArithError> {
    let disc = -(d as i64);
    if !is_fundamental_discriminant(disc) {
        return Err(ArithError::Domain(format!("-{d} is not a fundamental discriminant")));
    }
    let fac = table.factorize_any(m)?;
    let mut count = 1u64;
    for &(l, e) in fac.pairs() {
        count *= match kronecker(disc, l as i64)? {
            1 => e as u64 + 1,
            -1 => u64::from(e % 2 == 0),
            _ => 1,
        };
        if count == 0 {
            break;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::build_factor_table;
    use std::sync::OnceLock;

    fn table() -> &'static FactorTable {
        static T: OnceLock<FactorTable> = OnceLock::new();
        T.get_or_init(|| build_factor_table(100_000).unwrap())
    }

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn xi_worked_values() {
        let t = table();
        let strict = XiPolicy::StrictPartial;
        assert_eq!(xi(-4, 11, t, strict).unwrap(), r(-2, 1));
        assert_eq!(xi(-8, 11, t, strict).unwrap(), r(0, 1));
        assert_eq!(xi(-7, 15, t, strict).unwrap(), r(4, 1));
        assert_eq!(xi(-7, 1, t, strict).unwrap(), r(1, 1));
    }

    #[test]
    fn xi_strict_reports_branch() {
        let t = table();
        assert_eq!(
            xi(-16, 2, t, XiPolicy::StrictPartial),
            Err(ArithError::UnresolvedXi { delta: -16, q: 2 })
        );
        assert_eq!(
            xi(-27, 21, t, XiPolicy::StrictPartial),
            Err(ArithError::UnresolvedXi { delta: -27, q: 3 })
        );
    }

    #[test]
    fn xi_resolved_local_factors() {
        let t = table();
        let res = XiPolicy::Resolved;
        // −16 = −4·2²: (q−1)·1 + (0−1)·ψ(2) over 1 + ψ(2) with ψ(2) = 2.
        assert_eq!(xi(-16, 2, t, res).unwrap(), r(-1, 3));
        // −8 is fundamental although 4 | −8: reduces to (Δ/2) − 1.
        assert_eq!(xi(-8, 2, t, res).unwrap(), r(-1, 1));
        // −27 = −3·3²: ψ(3) = 3, (2·1 − 3)/4.
        assert_eq!(xi(-27, 3, t, res).unwrap(), r(-1, 4));
        // Agrees with the simple rule away from the branch.
        for delta in [-3i64, -4, -7, -8, -11, -15, -20, -23] {
            for n in [5u64, 7, 11, 13, 35] {
                assert_eq!(xi(delta, n, t, res).unwrap(), xi(delta, n, t, XiPolicy::StrictPartial).unwrap());
            }
        }
    }

    #[test]
    fn xi_multiplicative() {
        let t = table();
        for delta in (-400i64..0).filter(|d| matches!(d.rem_euclid(4), 0 | 1)) {
            for (a, b) in [(2u64, 3u64), (5, 7), (6, 35), (11, 13), (10, 21)] {
                let lhs = xi(delta, a * b, t, XiPolicy::Resolved).unwrap();
                let rhs = xi(delta, a, t, XiPolicy::Resolved).unwrap() * xi(delta, b, t, XiPolicy::Resolved).unwrap();
                assert_eq!(lhs, rhs, "delta={delta}");
            }
        }
    }

    #[test]
    fn xi_rejects_bad_input() {
        let t = table();
        assert!(xi(-7, 12, t, XiPolicy::Resolved).is_err());
        assert!(xi(5, 7, t, XiPolicy::Resolved).is_err());
        assert!(xi(-6, 7, t, XiPolicy::Resolved).is_err());
    }

    #[test]
    fn sigma_and_divisors() {
        assert_eq!(sigma_coprime(1, 11), 1);
        assert_eq!(sigma_coprime(2, 11), 3);
        assert_eq!(sigma_coprime(4, 2), 1);
        assert_eq!(divisor_count(1), 1);
        assert_eq!(divisor_count(12), 6);
        assert_eq!(divisor_count(49), 3);
    }

    #[test]
    fn ideal_counts() {
        let t = table();
        assert_eq!(ideal_count(3, 3, t).unwrap(), 1);
        assert_eq!(ideal_count(2, 3, t).unwrap(), 0);
        assert_eq!(ideal_count(7, 3, t).unwrap(), 2);
        assert_eq!(ideal_count(1, 3, t).unwrap(), 1);
        assert!(ideal_count(5, 12, t).is_err());
    }

    #[test]
    fn ideal_count_is_character_divisor_sum() {
        let t = table();
        for d in [3u64, 7, 11] {
            for m in 1..=10_000u64 {
                let direct: i64 = Factorization::trial_division(m)
                    .divisors()
                    .into_iter()
                    .map(|e| kronecker(-(d as i64), e as i64).unwrap() as i64)
                    .sum();
                assert_eq!(ideal_count(m, d, t).unwrap() as i64, direct, "m={m} D={d}");
            }
        }
    }

    #[test]
    fn classification() {
        assert_eq!(classify_discriminant(15), DiscriminantClass::Odd1Mod8);
        assert_eq!(classify_discriminant(20), DiscriminantClass::Even1Mod4);
        assert_eq!(classify_discriminant(16), DiscriminantClass::NotClassified);
        assert_eq!(classify_discriminant(3), DiscriminantClass::Odd5Mod8);
        assert_eq!(classify_discriminant(7), DiscriminantClass::Odd1Mod8);
        assert_eq!(classify_discriminant(12), DiscriminantClass::Even3Mod4);
        assert_eq!(classify_discriminant(45), DiscriminantClass::NotClassified);
        assert_eq!(classify_discriminant(5), DiscriminantClass::NotClassified);
    }

    #[test]
    fn fundamental_discriminants() {
        for d in [-3i64, -4, -7, -8, -11, -15, -20, -23, -24] {
            assert!(is_fundamental_discriminant(d), "{d}");
        }
        for d in [-12i64, -16, -27, -28, -1, 0, 1, -2] {
            assert!(!is_fundamental_discriminant(d), "{d}");
        }
        let t = table();
        assert_eq!(fundamental_part(-16, t).unwrap(), (-4, 2));
        assert_eq!(fundamental_part(-27, t).unwrap(), (-3, 3));
        assert_eq!(fundamental_part(-28, t).unwrap(), (-7, 2));
        assert_eq!(fundamental_part(-8, t).unwrap(), (-8, 1));
        assert_eq!(fundamental_part(-4 * 9 * 5, t).unwrap(), (-20, 3));
    }
}
