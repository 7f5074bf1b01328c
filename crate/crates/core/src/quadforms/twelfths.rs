use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_rational::Ratio;

/// Exact element of (1/12)Z, stored as twelve times its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Twelfths(i64);

impl Twelfths {
    pub const ZERO: Twelfths = Twelfths(0);

    pub const fn from_num12(num12: i64) -> Self {
        Twelfths(num12)
    }

    pub const fn from_int(n: i64) -> Self {
        Twelfths(12 * n)
    }

    pub const fn num12(self) -> i64 {
        self.0
    }

    pub fn to_ratio(self) -> Ratio<i64> {
        Ratio::new(self.0, 12)
    }

    /// Integer value when the twelfths divide out exactly.
    pub fn to_integer(self) -> Option<i64> {
        (self.0 % 12 == 0).then_some(self.0 / 12)
    }
}

impl Add for Twelfths {
    type Output = Twelfths;
    fn add(self, rhs: Twelfths) -> Twelfths {
        Twelfths(self.0.checked_add(rhs.0).expect("twelfths overflow"))
    }
}

impl AddAssign for Twelfths {
    fn add_assign(&mut self, rhs: Twelfths) {
        *self = *self + rhs;
    }
}

impl Sub for Twelfths {
    type Output = Twelfths;
    fn sub(self, rhs: Twelfths) -> Twelfths {
        Twelfths(self.0.checked_sub(rhs.0).expect("twelfths overflow"))
    }
}

impl SubAssign for Twelfths {
    fn sub_assign(&mut self, rhs: Twelfths) {
        *self = *self - rhs;
    }
}

impl Neg for Twelfths {
    type Output = Twelfths;
    fn neg(self) -> Twelfths {
        Twelfths(-self.0)
    }
}

impl Mul<i64> for Twelfths {
    type Output = Twelfths;
    fn mul(self, rhs: i64) -> Twelfths {
        Twelfths(self.0.checked_mul(rhs).expect("twelfths overflow"))
    }
}

impl Sum for Twelfths {
    fn sum<I: Iterator<Item = Twelfths>>(iter: I) -> Twelfths {
        iter.fold(Twelfths::ZERO, |a, b| a + b)
    }
}

impl std::fmt::Display for Twelfths {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let r = self.to_ratio();
        if r.is_integer() {
            write!(f, "{}", r.numer())
        } else {
            write!(f, "{}/{}", r.numer(), r.denom())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_exact() {
        let third = Twelfths::from_num12(4);
        let half = Twelfths::from_num12(6);
        assert_eq!(third + half, Twelfths::from_num12(10));
        assert_eq!((third * 3).to_integer(), Some(1));
        assert_eq!(half.to_integer(), None);
        assert_eq!(half.to_ratio(), Ratio::new(1, 2));
        assert_eq!(format!("{}", Twelfths::from_num12(-1)), "-1/12");
        assert_eq!(vec![third, third, third].into_iter().sum::<Twelfths>(), Twelfths::from_int(1));
    }
}
