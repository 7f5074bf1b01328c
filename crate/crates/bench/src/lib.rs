//! Criterion benchmarks for the arithmetic kernels live in `benches/`.
//! This crate only carries shared inputs for them.

/// Odd primes just above `start`, for per-prime benchmark loops.
pub fn primes_from(start: u64, count: usize) -> Vec<u64> {
    (start..).filter(|&n| murmur_core::arith::is_prime_u64(n)).take(count).collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn primes_from_1000() {
        assert_eq!(super::primes_from(1000, 3), vec![1009, 1013, 1019]);
    }
}
