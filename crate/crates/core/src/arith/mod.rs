//! Multiplicative-function kernels: factor tables, Möbius and Mertens,
//! Kronecker symbols, divisor sums, ideal counts in imaginary quadratic
//! fields, and the ξ_Δ factor of the newspace trace formula.

mod functions;
mod kronecker;
mod sieve;

pub use functions::{
    classify_discriminant, divisor_count, fundamental_part, ideal_count, is_fundamental_discriminant,
    sigma_coprime, xi, xi_local, DiscriminantClass, XiPolicy,
};
pub use kronecker::kronecker;
pub use sieve::{
    build_factor_table, euler_phi, is_prime_u64, is_squarefree, mertens, mobius, mobius_sieve,
    primes_up_to, FactorTable, DEFAULT_MEMORY_BUDGET,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{n} exceeds factor table limit {limit}")]
    OutOfTable { n: u64, limit: u64 },
    #[error("table of limit {limit} needs {bytes} bytes, over the memory budget")]
    Resource { limit: u64, bytes: u64 },
    /// q² | Δ under the strict-partial ξ policy.
    #[error("xi_{delta}({q}) is not covered by the strict-partial policy (q^2 divides delta)")]
    UnresolvedXi { delta: i64, q: u64 },
}

/// Prime factorization as ascending (prime, exponent) pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    pub(crate) fn from_sorted(pairs: Vec<(u64, u32)>) -> Self {
        debug_assert!(pairs.windows(2).all(|w| w[0].0 < w[1].0));
        Factorization(pairs)
    }

    pub fn trial_division(mut n: u64) -> Self {
        assert!(n > 0, "cannot factor 0");
        let mut pairs = Vec::new();
        let mut d = 2u64;
        while d * d <= n {
            if n % d == 0 {
                let mut e = 0;
                while n % d == 0 {
                    n /= d;
                    e += 1;
                }
                pairs.push((d, e));
            }
            d += if d == 2 { 1 } else { 2 };
        }
        if n > 1 {
            pairs.push((n, 1));
        }
        Factorization(pairs)
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&(p, _)| p)
    }

    pub fn value(&self) -> u64 {
        self.0.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&(_, e)| e == 1)
    }

    pub fn mobius(&self) -> i8 {
        if !self.is_squarefree() {
            0
        } else if self.0.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn euler_phi(&self) -> u64 {
        self.0.iter().map(|&(p, e)| (p - 1) * p.pow(e - 1)).product()
    }

    pub fn divisor_count(&self) -> u64 {
        self.0.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.0 {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    pub fn omega(&self) -> usize {
        self.0.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn table() -> &'static FactorTable {
        static T: OnceLock<FactorTable> = OnceLock::new();
        T.get_or_init(|| build_factor_table(1_000_000).unwrap())
    }

    #[test]
    fn trial_division_reconstructs() {
        for n in 1..2000u64 {
            let f = Factorization::trial_division(n);
            assert_eq!(f.value(), n);
            assert!(f.pairs().windows(2).all(|w| w[0].0 < w[1].0));
            assert!(f.pairs().iter().all(|&(p, e)| e >= 1 && is_prime_u64(p)));
        }
    }

    #[test]
    fn divisors_of_twelve() {
        assert_eq!(Factorization::trial_division(12).divisors(), vec![1, 2, 3, 4, 6, 12]);
    }

    fn coprime_pair() -> impl Strategy<Value = (u64, u64)> {
        (1u64..1_000, 1u64..1_000).prop_filter("coprime", |&(m, n)| num_integer::gcd(m, n) == 1)
    }

    proptest! {
        #[test]
        fn multiplicative_functions((m, n) in coprime_pair()) {
            let t = table();
            let mn = m * n;
            prop_assert_eq!(mobius(mn, t).unwrap(), mobius(m, t).unwrap() * mobius(n, t).unwrap());
            prop_assert_eq!(euler_phi(mn, t).unwrap(), euler_phi(m, t).unwrap() * euler_phi(n, t).unwrap());
            prop_assert_eq!(divisor_count(mn), divisor_count(m) * divisor_count(n));
            for big_n in [1u64, 2, 11, 15, 30] {
                prop_assert_eq!(sigma_coprime(mn, big_n), sigma_coprime(m, big_n) * sigma_coprime(n, big_n));
            }
            for d in [3u64, 7, 11] {
                prop_assert_eq!(
                    ideal_count(mn, d, t).unwrap(),
                    ideal_count(m, d, t).unwrap() * ideal_count(n, d, t).unwrap()
                );
            }
        }
    }
}
