//! Kronecker symbol (a/n) for arbitrary integers.

use super::ArithError;

/// Full Kronecker symbol, extending the Jacobi symbol to even and
/// non-positive lower arguments: (a/−1) = sign(a), (a/0) = 1 iff a = ±1,
/// (a/2) = 0 for even a, else +1 when a ≡ ±1 (mod 8) and −1 when a ≡ ±3.
pub fn kronecker(a: i64, n: i64) -> Result<i8, ArithError> {
    if n == 0 {
        return match a {
            0 => Err(ArithError::Domain("kronecker symbol (0/0) is undefined".into())),
            1 | -1 => Ok(1),
            _ => Ok(0),
        };
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut result: i8 = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return Ok(0);
        }
        n >>= twos;
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    // n is now odd and positive: Jacobi symbol.
    a = a.rem_euclid(n);
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && matches!(n % 8, 3 | 5) {
            result = -result;
        }
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    Ok(if n == 1 { result } else { 0 })
}
