//! Smallest-prime-factor tables and the multiplicative functions read off them.

use super::{ArithError, Factorization};

/// Default cap on table memory: 4 GiB.
pub const DEFAULT_MEMORY_BUDGET: u64 = 4 << 30;

/// Smallest prime factor for every `n` in `0..=limit`.
///
/// Entries 0 and 1 hold 0 and 1 respectively; every other entry is the
/// smallest prime dividing its index.
#[derive(Clone, PartialEq, Eq)]
pub struct FactorTable {
    limit: u32,
    spf: Vec<u32>,
}

impl std::fmt::Debug for FactorTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FactorTable").field("limit", &self.limit).finish()
    }
}

impl FactorTable {
    /// Linear sieve, O(limit).
    pub fn build(limit: u64) -> Result<Self, ArithError> {
        Self::build_with_budget(limit, DEFAULT_MEMORY_BUDGET)
    }

    pub fn build_with_budget(limit: u64, budget_bytes: u64) -> Result<Self, ArithError> {
        if limit < 2 {
            return Err(ArithError::Domain(format!("factor table limit must be >= 2, got {limit}")));
        }
        let bytes = (limit + 1).saturating_mul(4);
        if limit > u32::MAX as u64 - 1 || bytes > budget_bytes {
            return Err(ArithError::Resource { limit, bytes });
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        spf[1] = 1;
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m > n {
                    break;
                }
                spf[m] = p;
            }
        }
        Ok(FactorTable { limit: limit as u32, spf })
    }

    /// Rebuilds a table from raw entries (used by the binary cache loader).
    pub fn from_raw(spf: Vec<u32>) -> Result<Self, ArithError> {
        if spf.len() < 3 {
            return Err(ArithError::Domain("factor table needs entries for 0..=2".into()));
        }
        let limit = (spf.len() - 1) as u32;
        Ok(FactorTable { limit, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit as u64
    }

    pub fn raw(&self) -> &[u32] {
        &self.spf
    }

    /// Smallest prime factor of `n` (2 ≤ n ≤ limit).
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    pub fn covers(&self, n: u64) -> bool {
        n >= 1 && n <= self.limit as u64
    }

    fn check(&self, n: u64) -> Result<(), ArithError> {
        if n == 0 {
            Err(ArithError::Domain("argument must be positive".into()))
        } else if n > self.limit as u64 {
            Err(ArithError::OutOfTable { n, limit: self.limit as u64 })
        } else {
            Ok(())
        }
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit as u64 && self.spf[n as usize] as u64 == n
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization, ArithError> {
        self.check(n)?;
        let mut pairs: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            pairs.push((p, e));
        }
        Ok(Factorization::from_sorted(pairs))
    }

    /// Factors any `n`, falling back to trial division beyond the table.
    pub fn factorize_any(&self, n: u64) -> Result<Factorization, ArithError> {
        if n == 0 {
            return Err(ArithError::Domain("cannot factor 0".into()));
        }
        if n <= self.limit as u64 {
            self.factorize(n)
        } else {
            Ok(Factorization::trial_division(n))
        }
    }
}

pub fn build_factor_table(limit: u64) -> Result<FactorTable, ArithError> {
    FactorTable::build(limit)
}

pub fn mobius(n: u64, table: &FactorTable) -> Result<i8, ArithError> {
    table.check(n)?;
    let mut m = n;
    let mut sign = 1i8;
    while m > 1 {
        let p = table.spf[m as usize] as u64;
        m /= p;
        if m % p == 0 {
            return Ok(0);
        }
        sign = -sign;
    }
    Ok(sign)
}

pub fn euler_phi(n: u64, table: &FactorTable) -> Result<u64, ArithError> {
    Ok(table.factorize(n)?.euler_phi())
}

pub fn is_squarefree(n: u64, table: &FactorTable) -> Result<bool, ArithError> {
    Ok(mobius(n, table)? != 0)
}

/// Möbius values for `0..=limit` (index 0 holds 0).
pub fn mobius_sieve(limit: u64) -> Vec<i8> {
    let n = limit as usize;
    let mut mu = vec![1i8; n + 1];
    mu[0] = 0;
    let mut composite = vec![false; n + 1];
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        let mut k = p;
        while k <= n {
            if k > p {
                composite[k] = true;
            }
            mu[k] = -mu[k];
            k += p;
        }
        if let Some(sq) = p.checked_mul(p) {
            let mut k = sq;
            while k <= n {
                mu[k] = 0;
                k += sq;
            }
        }
    }
    mu
}

/// Mertens function M(X) = Σ_{1≤N≤X} μ(N).
pub fn mertens(x: u64) -> i64 {
    mobius_sieve(x).iter().map(|&m| m as i64).sum()
}

/// Primes up to `limit` in increasing order.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut k = i * i;
            while k <= n {
                composite[k] = true;
                k += i;
            }
        }
    }
    out
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
