//! Coefficient fields.
//!
//! Every product, checker and enumeration in this crate is generic over a
//! [`Scalar`]. Exact work uses [`Rational`] (arbitrary precision); the fixed
//! width [`SmallRational`] is handy for large candidate sweeps and `f64` is
//! supported for quick numerical experiments, where equality tests are of
//! course only as good as floating point.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Num;

/// Arbitrary precision rational numbers, the default coefficient field.
pub type Rational = Ratio<BigInt>;

/// Fixed width rationals. Overflow panics, so keep them to small tables.
pub type SmallRational = Ratio<i64>;

pub trait Scalar:
    Num + Neg<Output = Self> + Clone + PartialEq + Debug + Display + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    /// Whether the value equals an integer `n`.
    fn is_int(&self, n: i64) -> bool {
        *self == Self::from_int(n)
    }

    /// `true` iff the value is 0 or 1.
    fn is_boolean(&self) -> bool {
        self.is_zero() || self.is_one()
    }

    /// Strict sign test.
    fn is_negative(&self) -> bool;

    fn factorial(n: u32) -> Self {
        (1..=n as i64).fold(Self::one(), |acc, k| acc * Self::from_int(k))
    }

    fn binomial(n: u32, k: u32) -> Self {
        if k > n {
            return Self::zero();
        }
        Self::factorial(n) / (Self::factorial(k) * Self::factorial(n - k))
    }

    fn powi(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc * self.clone())
    }
}

impl Scalar for Rational {
    fn from_int(n: i64) -> Self {
        Ratio::from_integer(BigInt::from(n))
    }

    fn is_negative(&self) -> bool {
        num_traits::Signed::is_negative(self)
    }
}

macro_rules! impl_small_ratio {
    ($($t:ty),*) => {$(
        impl Scalar for Ratio<$t> {
            fn from_int(n: i64) -> Self {
                Ratio::from_integer(<$t>::try_from(n).expect("integer out of range"))
            }

            fn is_negative(&self) -> bool {
                num_traits::Signed::is_negative(self)
            }
        }
    )*};
}

impl_small_ratio!(i32, i64, i128);

macro_rules! impl_float {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn from_int(n: i64) -> Self {
                n as $t
            }

            fn is_negative(&self) -> bool {
                *self < 0.0
            }
        }
    )*};
}

impl_float!(f32, f64);

/// Parses `p` or `p/q` into a [`Rational`] in lowest terms.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (text.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if num_traits::Zero::is_zero(&den) {
        return None;
    }
    Some(Ratio::new(num, den))
}

/// Converts between coefficient fields through exact rationals.
pub fn rational_to<K: Scalar>(q: &Rational) -> K {
    use num_traits::ToPrimitive;
    let num = q.numer().to_i64().expect("numerator too large");
    let den = q.denom().to_i64().expect("denominator too large");
    K::from_ratio(num, den)
}
