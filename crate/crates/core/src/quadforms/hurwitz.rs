//! Block-sieved table of Hurwitz class numbers H(−n), 0 ≤ n ≤ limit.
//!
//! Every reduced triple (a, b, c) lands on n = 4ac − b². Blocks of the
//! n-axis are filled independently: for each block every (a, |b|) pair
//! walks its arithmetic progression n ≡ −b² (mod 4a) inside the block.
//! The ±b pair is folded into one visit, so each visit adds the weight of
//! both signs at once (boundary cases a = c and |b| = a keep b ≥ 0 only).
//! Total work is O(limit^{3/2}); block independence makes the result the
//! same for any thread count.

use rayon::prelude::*;

use super::{QuadFormError, Twelfths};
use crate::arith::DEFAULT_MEMORY_BUDGET;

/// Entries per block; 1 MiB of i32.
pub const HURWITZ_BLOCK: usize = 1 << 18;

#[derive(Clone, PartialEq, Eq)]
pub struct HurwitzTable {
    values: Vec<i32>,
}

impl std::fmt::Debug for HurwitzTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HurwitzTable").field("limit", &self.limit()).finish()
    }
}

impl HurwitzTable {
    pub fn limit(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    /// H(−n) for 0 ≤ n ≤ limit.
    pub fn get(&self, n: u64) -> Twelfths {
        Twelfths::from_num12(self.values[n as usize] as i64)
    }

    /// H at a signed discriminant argument; `None` when |disc| exceeds the table.
    pub fn hurwitz(&self, disc: i64) -> Option<Twelfths> {
        if disc > 0 {
            return Some(Twelfths::ZERO);
        }
        let n = disc.unsigned_abs();
        (n <= self.limit()).then(|| self.get(n))
    }

    pub fn raw(&self) -> &[i32] {
        &self.values
    }

    pub fn from_raw(values: Vec<i32>) -> Result<Self, QuadFormError> {
        if values.len() < 5 {
            return Err(QuadFormError::LimitTooSmall(values.len().saturating_sub(1) as u64));
        }
        Ok(HurwitzTable { values })
    }
}

fn check_limit(limit: u64) -> Result<(), QuadFormError> {
    if limit < 4 {
        return Err(QuadFormError::LimitTooSmall(limit));
    }
    let bytes = (limit + 1).saturating_mul(4);
    if bytes > DEFAULT_MEMORY_BUDGET || limit > i32::MAX as u64 {
        return Err(QuadFormError::Resource { limit, bytes });
    }
    Ok(())
}

/// Fills `out`, which holds H(−n)·12 for n in [lo, lo + out.len()).
fn fill_block(lo: u64, out: &mut [i32]) {
    let hi = lo + out.len() as u64; // exclusive
    if lo == 0 {
        out[0] = -1;
    }
    let mut a = 1u64;
    while 3 * a * a < hi {
        let step = 4 * a;
        for b in 0..=a {
            let b2 = b * b;
            // c ≥ a and 4ac − b² ≥ lo
            let c_lo = a.max((lo + b2).div_ceil(step));
            let top = hi - 1 + b2;
            if c_lo * step > top {
                continue;
            }
            let c_hi = top / step;
            let (w_eq, w_gt) = if b == 0 {
                (6, 12)
            } else if b == a {
                (4, 12)
            } else {
                (12, 24)
            };
            let mut c = c_lo;
            if c == a {
                let n = step * c - b2;
                out[(n - lo) as usize] += w_eq;
                c += 1;
            }
            if c > c_hi {
                continue;
            }
            let mut idx = (step * c - b2 - lo) as usize;
            let end = (step * c_hi - b2 - lo) as usize;
            let stride = step as usize;
            while idx <= end {
                out[idx] += w_gt;
                idx += stride;
            }
        }
        a += 1;
    }
}

/// Single-threaded build.
pub fn build_hurwitz_table(limit: u64) -> Result<HurwitzTable, QuadFormError> {
    check_limit(limit)?;
    let mut values = vec![0i32; limit as usize + 1];
    for (i, block) in values.chunks_mut(HURWITZ_BLOCK).enumerate() {
        fill_block((i * HURWITZ_BLOCK) as u64, block);
    }
    Ok(HurwitzTable { values })
}

/// Block-parallel build on the current rayon pool; identical output to
/// [`build_hurwitz_table`].
pub fn build_hurwitz_table_par(limit: u64) -> Result<HurwitzTable, QuadFormError> {
    check_limit(limit)?;
    let mut values = vec![0i32; limit as usize + 1];
    values
        .par_chunks_mut(HURWITZ_BLOCK)
        .enumerate()
        .for_each(|(i, block)| fill_block((i * HURWITZ_BLOCK) as u64, block));
    Ok(HurwitzTable { values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadforms::hurwitz;

    #[test]
    fn small_table_entries() {
        let t = build_hurwitz_table(200).unwrap();
        assert_eq!(t.get(104), Twelfths::from_int(6));
        assert_eq!(t.get(7), Twelfths::from_int(1));
        assert_eq!(t.get(0), Twelfths::from_num12(-1));
        assert_eq!(t.get(3), Twelfths::from_num12(4));
        assert_eq!(t.get(4), Twelfths::from_num12(6));
        // Kronecker–Hurwitz at p = 2
        let sum = t.get(8) + t.get(7) * 2 + t.get(4) * 2;
        assert_eq!(sum, Twelfths::from_int(4));
        assert_eq!(t.hurwitz(5), Some(Twelfths::ZERO));
        assert_eq!(t.hurwitz(-201), None);
    }

    #[test]
    fn table_matches_on_demand() {
        let limit = 20_000u64;
        let t = build_hurwitz_table(limit).unwrap();
        for n in 0..=limit {
            assert_eq!(t.get(n), hurwitz(-(n as i64)), "n={n}");
            if n % 4 == 1 || n % 4 == 2 {
                assert_eq!(t.get(n), Twelfths::ZERO);
            }
        }
    }

    #[test]
    fn blocks_cross_boundaries() {
        // Spans several blocks; spot-check around block edges.
        let limit = 3 * HURWITZ_BLOCK as u64 + 17;
        let seq = build_hurwitz_table(limit).unwrap();
        let par = build_hurwitz_table_par(limit).unwrap();
        assert_eq!(seq, par);
        for edge in [HURWITZ_BLOCK as u64, 2 * HURWITZ_BLOCK as u64, 3 * HURWITZ_BLOCK as u64] {
            for n in edge - 8..edge + 8 {
                assert_eq!(seq.get(n), hurwitz(-(n as i64)), "n={n}");
            }
        }
    }

    #[test]
    fn limit_errors() {
        assert!(matches!(build_hurwitz_table(3), Err(QuadFormError::LimitTooSmall(3))));
        assert!(matches!(build_hurwitz_table(1 << 40), Err(QuadFormError::Resource { .. })));
    }
}
