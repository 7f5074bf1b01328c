//! Positive definite binary quadratic forms: reduced-form enumeration,
//! Hurwitz class numbers and class numbers of imaginary quadratic fields.

mod hurwitz;
mod twelfths;

pub use hurwitz::{build_hurwitz_table, build_hurwitz_table_par, HurwitzTable, HURWITZ_BLOCK};
pub use twelfths::Twelfths;

use num_integer::Integer;
use thiserror::Error;

use crate::arith::{fundamental_part, is_fundamental_discriminant, kronecker, ArithError, FactorTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadFormError {
    #[error("{0} is not a negative discriminant (must be < 0 and ≡ 0, 1 mod 4)")]
    NotDiscriminant(i64),
    #[error("-{0} is not a fundamental discriminant")]
    NotFundamental(u64),
    #[error("hurwitz table of limit {limit} needs {bytes} bytes, over the memory budget")]
    Resource { limit: u64, bytes: u64 },
    #[error("hurwitz table limit must be at least 4, got {0}")]
    LimitTooSmall(u64),
}

/// Reduced positive definite form ax² + bxy + cy²:
/// |b| ≤ a ≤ c, and b ≥ 0 whenever |b| = a or a = c.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormTriple {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl FormTriple {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        FormTriple { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let FormTriple { a, b, c } = *self;
        a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// Class-number weight in twelfths: 4 for multiples of x²+xy+y²,
    /// 6 for multiples of x²+y², 12 otherwise.
    pub fn weight12(&self) -> i64 {
        if self.a == self.b && self.b == self.c {
            4
        } else if self.b == 0 && self.a == self.c {
            6
        } else {
            12
        }
    }
}

fn check_disc(disc: i64) -> Result<(), QuadFormError> {
    if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        Err(QuadFormError::NotDiscriminant(disc))
    } else {
        Ok(())
    }
}

/// Visits every reduced form of discriminant `disc` (imprimitive included)
/// in (a, b) order.
fn for_each_reduced(disc: i64, mut f: impl FnMut(FormTriple)) {
    let n = -disc;
    let mut a = 1i64;
    while 3 * a * a <= n {
        let mut b = -a + 1;
        if (b - disc).rem_euclid(2) != 0 {
            b += 1;
        }
        while b <= a {
            let num = b * b - disc;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                let form = FormTriple { a, b, c };
                if c >= a && form.is_reduced() {
                    f(form);
                }
            }
            b += 2;
        }
        a += 1;
    }
}

/// All reduced forms of discriminant `disc`, including imprimitive ones,
/// ordered by (a, b).
pub fn reduced_forms(disc: i64) -> Result<Vec<FormTriple>, QuadFormError> {
    check_disc(disc)?;
    let mut out = Vec::new();
    for_each_reduced(disc, |f| out.push(f));
    Ok(out)
}

/// Hurwitz class number H evaluated at a signed discriminant.
///
/// Positive arguments and arguments ≡ 2, 3 (mod 4) give 0, and H(0) = −1/12.
pub fn hurwitz(disc: i64) -> Twelfths {
    if disc > 0 || matches!(disc.rem_euclid(4), 2 | 3) {
        return Twelfths::ZERO;
    }
    if disc == 0 {
        return Twelfths::from_num12(-1);
    }
    let mut total = 0i64;
    for_each_reduced(disc, |f| total += f.weight12());
    Twelfths::from_num12(total)
}

/// H through the fundamental part: with disc = Δ0·F²,
/// 12·H = (12h(Δ0)/u(Δ0))·Σ_{g | F} ψ(g), ψ(ℓ^e) = ℓ^{e−1}(ℓ − (Δ0/ℓ)).
///
/// Cost is one class-number enumeration at |Δ0| plus a factorization, so
/// large arguments with a small fundamental part stay cheap.
pub fn hurwitz_factored(disc: i64, table: &FactorTable) -> Result<Twelfths, ArithError> {
    if disc > 0 || matches!(disc.rem_euclid(4), 2 | 3) {
        return Ok(Twelfths::ZERO);
    }
    if disc == 0 {
        return Ok(Twelfths::from_num12(-1));
    }
    let (d0, conductor) = fundamental_part(disc, table)?;
    let d = d0.unsigned_abs();
    let mut h = 0i64;
    for_each_reduced(d0, |f| {
        if f.is_primitive() {
            h += 1;
        }
    });
    let hw12 = 12 * h / unit_index(d) as i64;
    let mut psi_sum = 1i64;
    for &(l, e) in table.factorize_any(conductor)?.pairs() {
        let chi = kronecker(d0, l as i64)? as i64;
        let l = l as i64;
        let mut local = 1i64;
        let mut pk = 1i64;
        for _ in 0..e {
            local += pk * (l - chi);
            pk *= l;
        }
        psi_sum *= local;
    }
    Ok(Twelfths::from_num12(hw12 * psi_sum))
}

/// Class number h and unit index u of the field of discriminant −D.
pub fn class_number_fund(d: u64) -> Result<(u64, u32), QuadFormError> {
    let disc = -(d as i64);
    if !is_fundamental_discriminant(disc) {
        return Err(QuadFormError::NotFundamental(d));
    }
    let mut h = 0u64;
    for_each_reduced(disc, |f| {
        if f.is_primitive() {
            h += 1;
        }
    });
    Ok((h, unit_index(d)))
}

/// [O_K^× : Z^×] for K = Q(√−D).
pub fn unit_index(d: u64) -> u32 {
    match d {
        3 => 3,
        4 => 2,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{fundamental_part, build_factor_table, primes_up_to};

    fn t(a: i64, b: i64, c: i64) -> FormTriple {
        FormTriple::new(a, b, c)
    }

    #[test]
    fn reduced_form_lists() {
        assert_eq!(reduced_forms(-3).unwrap(), vec![t(1, 1, 1)]);
        assert_eq!(reduced_forms(-23).unwrap(), vec![t(1, 1, 6), t(2, -1, 3), t(2, 1, 3)]);
        assert_eq!(
            reduced_forms(-44).unwrap(),
            vec![t(1, 0, 11), t(2, 2, 6), t(3, -2, 4), t(3, 2, 4)]
        );
        assert!(matches!(reduced_forms(-6), Err(QuadFormError::NotDiscriminant(-6))));
        assert!(matches!(reduced_forms(-5), Err(QuadFormError::NotDiscriminant(-5))));
        assert!(reduced_forms(5).is_err());
    }

    /// Independent brute force: scan a box of (a, b, c) and keep reduced triples.
    fn brute_forms(disc: i64) -> Vec<FormTriple> {
        let n = -disc;
        let mut out = Vec::new();
        for a in 1..=n {
            for b in -a..=a {
                for c in a..=n {
                    let f = t(a, b, c);
                    if f.discriminant() == disc && f.is_reduced() {
                        out.push(f);
                    }
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in (3..=160i64).filter(|n| matches!(n % 4, 0 | 3)) {
            assert_eq!(reduced_forms(-n).unwrap(), brute_forms(-n), "disc -{n}");
        }
    }

    #[test]
    fn hurwitz_values() {
        assert_eq!(hurwitz(-3), Twelfths::from_num12(4));
        assert_eq!(hurwitz(-4), Twelfths::from_num12(6));
        assert_eq!(hurwitz(0), Twelfths::from_num12(-1));
        assert_eq!(hurwitz(5), Twelfths::ZERO);
        assert_eq!(hurwitz(-88), Twelfths::from_int(2));
        assert_eq!(hurwitz(-120), Twelfths::from_int(4));
        assert_eq!(hurwitz(-44), Twelfths::from_int(4));
        assert_eq!(hurwitz(-104), Twelfths::from_int(6));
        assert_eq!(hurwitz(-7), Twelfths::from_int(1));
        assert_eq!(hurwitz(-156), Twelfths::from_int(8));
        assert_eq!(hurwitz(-20), Twelfths::from_int(2));
        assert_eq!(hurwitz(-5), Twelfths::ZERO);
        assert_eq!(hurwitz(-6), Twelfths::ZERO);
    }

    #[test]
    fn kronecker_hurwitz_relation() {
        for p in primes_up_to(2000) {
            let p = p as i64;
            let mut sum = Twelfths::ZERO;
            let mut s = 0i64;
            while s * s <= 4 * p {
                let h = hurwitz(s * s - 4 * p);
                sum += if s == 0 { h } else { h + h };
                s += 1;
            }
            assert_eq!(sum, Twelfths::from_int(2 * p), "p={p}");
        }
    }

    #[test]
    fn class_numbers() {
        assert_eq!(class_number_fund(3).unwrap(), (1, 3));
        assert_eq!(class_number_fund(23).unwrap(), (3, 1));
        assert_eq!(class_number_fund(4).unwrap(), (1, 2));
        assert_eq!(class_number_fund(20).unwrap(), (2, 1));
        assert!(matches!(class_number_fund(12), Err(QuadFormError::NotFundamental(12))));
    }

    /// H(−n) = Σ_{f² | n, −n/f² a discriminant} h(−n/f²)·2/w(−n/f²), with the
    /// order class numbers taken from the fundamental class number via
    /// h_w(Δ0 g²) = h_w(Δ0)·g·∏_{ℓ | g}(1 − (Δ0/ℓ)/ℓ).
    #[test]
    fn hurwitz_decomposes_over_fundamental_class_numbers() {
        let table = build_factor_table(10_000).unwrap();
        for n in (3..=5000i64).filter(|n| matches!(n % 4, 0 | 3)) {
            let (d0, conductor) = fundamental_part(-n, &table).unwrap();
            let (h0, u0) = class_number_fund(d0.unsigned_abs()).unwrap();
            // h_w(Δ0) in twelfths
            let hw0 = 12 * h0 as i64 / u0 as i64;
            let mut total = num_rational::Ratio::from_integer(0i64);
            for g in 1..=conductor {
                if conductor % g != 0 {
                    continue;
                }
                let mut factor = num_rational::Ratio::from_integer(g as i64);
                for (l, _) in crate::arith::Factorization::trial_division(g).pairs() {
                    let chi = crate::arith::kronecker(d0, *l as i64).unwrap() as i64;
                    factor *= num_rational::Ratio::new(*l as i64 - chi, *l as i64);
                }
                total += factor * hw0;
            }
            assert_eq!(total, num_rational::Ratio::from_integer(hurwitz(-n).num12()), "n={n}");
        }
    }

    #[test]
    fn factored_route_matches_enumeration() {
        let table = build_factor_table(1000).unwrap();
        for n in (0..=20_000i64).chain([1_000_003 * 4, 27 * 4 * 121 * 49]) {
            assert_eq!(hurwitz_factored(-n, &table).unwrap(), hurwitz(-n), "n={n}");
        }
        assert_eq!(hurwitz_factored(5, &table).unwrap(), Twelfths::ZERO);
    }

    #[test]
    fn hurwitz_positive_and_integral() {
        for n in (3..=3000i64).filter(|n| matches!(n % 4, 0 | 3)) {
            assert!(hurwitz(-n).num12() > 0);
        }
    }
}
