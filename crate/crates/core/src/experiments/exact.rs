//! Exact values of the form (Σ a_k √k) / (Σ b_k √k) with rational
//! coefficients and squarefree k.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::Factorization;

/// Σ c_k √k over squarefree k ≥ 1 with nonzero rational c_k.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SurdSum {
    terms: BTreeMap<u64, BigRational>,
}

/// n = m²·k with k squarefree; returns (m, k).
fn split_square(n: u64) -> (u64, u64) {
    let mut m = 1;
    let mut k = 1;
    for &(p, e) in Factorization::trial_division(n).pairs() {
        m *= p.pow(e / 2);
        if e % 2 == 1 {
            k *= p;
        }
    }
    (m, k)
}

impl SurdSum {
    pub fn zero() -> Self {
        SurdSum::default()
    }

    pub fn rational(r: BigRational) -> Self {
        let mut s = SurdSum::zero();
        s.add_term(1, r);
        s
    }

    pub fn integer(i: impl Into<BigInt>) -> Self {
        SurdSum::rational(BigRational::from_integer(i.into()))
    }

    /// c·√n for any n ≥ 0.
    pub fn sqrt_term(coeff: BigRational, n: u64) -> Self {
        let mut s = SurdSum::zero();
        if n > 0 {
            let (m, k) = split_square(n);
            s.add_term(k, coeff * BigInt::from(m));
        }
        s
    }

    /// Σ c_n √n from (n, c_n) pairs.
    pub fn from_sqrt_weights(weights: impl IntoIterator<Item = (u64, i128)>) -> Self {
        let mut s = SurdSum::zero();
        for (n, c) in weights {
            if c != 0 && n > 0 {
                let (m, k) = split_square(n);
                s.add_term(k, BigRational::from_integer(BigInt::from(c) * BigInt::from(m)));
            }
        }
        s
    }

    fn add_term(&mut self, k: u64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> + '_ {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &SurdSum) -> SurdSum {
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> SurdSum {
        SurdSum { terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect() }
    }

    pub fn sub(&self, other: &SurdSum) -> SurdSum {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &BigRational) -> SurdSum {
        if r.is_zero() {
            return SurdSum::zero();
        }
        SurdSum { terms: self.terms.iter().map(|(&k, c)| (k, c * r)).collect() }
    }

    /// √a·√b = g·√((a/g)(b/g)) with g = gcd(a, b).
    pub fn mul(&self, other: &SurdSum) -> SurdSum {
        let mut out = SurdSum::zero();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &other.terms {
                let g = a.gcd(&b);
                out.add_term((a / g) * (b / g), ca * cb * BigInt::from(g));
            }
        }
        out
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&k, c)| c.to_f64().unwrap_or(f64::NAN) * (k as f64).sqrt())
            .sum()
    }
}

impl fmt::Display for SurdSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&k, c)) in self.terms.iter().enumerate() {
            let sep = if i == 0 { "" } else { " + " };
            match k {
                1 => write!(f, "{sep}{c}")?,
                _ if c.is_one() => write!(f, "{sep}√{k}")?,
                _ => write!(f, "{sep}({c})√{k}")?,
            }
        }
        Ok(())
    }
}

/// num / den with den ≠ 0. Kept with a rational denominator whenever the
/// denominator is a single surd term.
#[derive(Debug, Clone)]
pub struct Exact {
    num: SurdSum,
    den: SurdSum,
}

impl Exact {
    /// `None` when the denominator vanishes.
    pub fn new(num: SurdSum, den: SurdSum) -> Option<Exact> {
        if den.is_zero() {
            return None;
        }
        let mut e = Exact { num, den };
        e.normalize();
        Some(e)
    }

    pub fn from_rational(r: BigRational) -> Exact {
        Exact { num: SurdSum::rational(r), den: SurdSum::integer(1) }
    }

    pub fn from_integer(i: impl Into<BigInt>) -> Exact {
        Exact::from_rational(BigRational::from_integer(i.into()))
    }

    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Option<Exact> {
        let den = den.into();
        (!den.is_zero()).then(|| Exact::from_rational(BigRational::new(num.into(), den)))
    }

    fn normalize(&mut self) {
        if self.den.terms.len() == 1 {
            let (&k, c) = self.den.terms.iter().next().unwrap();
            let rat = c * BigInt::from(k);
            let rk = SurdSum::sqrt_term(rat.recip(), k);
            self.num = self.num.mul(&rk);
            self.den = SurdSum::integer(1);
        }
    }

    pub fn numerator(&self) -> &SurdSum {
        &self.num
    }

    pub fn denominator(&self) -> &SurdSum {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        Some(self.num.as_rational()? / self.den.as_rational()?)
    }

    pub fn add(&self, other: &Exact) -> Exact {
        if self.den == other.den {
            return Exact { num: self.num.add(&other.num), den: self.den.clone() };
        }
        let mut e = Exact {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        };
        e.normalize();
        e
    }

    pub fn neg(&self) -> Exact {
        Exact { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Exact) -> Exact {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &BigRational) -> Exact {
        Exact { num: self.num.scale(r), den: self.den.clone() }
    }

    pub fn to_f64(&self) -> f64 {
        self.num.to_f64() / self.den.to_f64()
    }
}

impl PartialEq for Exact {
    fn eq(&self, other: &Exact) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for Exact {}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.den.as_rational() {
            Some(d) if d.is_one() => write!(f, "{}", self.num),
            _ => write!(f, "({}) / ({})", self.num, self.den),
        }
    }
}
