//! Scalar abstraction shared by the polynomial, integration and elimination code.
//!
//! Everything in this crate is written against [`Scalar`], a characteristic-zero
//! field. The exact instantiation ([`BigRational`]) is what the verifiers use;
//! `f64`/`f32` instantiations are handy for fast evaluation and for the
//! floating-point oracle.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// A field of characteristic zero that the algorithms can compute in.
pub trait Scalar: Num + Clone + PartialOrd + fmt::Debug + std::ops::Neg<Output = Self> + Send + Sync + 'static {
    /// Embeds an integer.
    fn from_integer(n: BigInt) -> Self;

    /// Embeds the fraction `num / den`. `den` must be nonzero.
    fn from_fraction(num: BigInt, den: BigInt) -> Self {
        Self::from_integer(num) / Self::from_integer(den)
    }

    fn from_i64(n: i64) -> Self {
        Self::from_integer(BigInt::from(n))
    }

    /// Nearest `f64`; used by the floating-point oracle and by CSV output.
    fn to_f64(&self) -> f64;

    /// Whether arithmetic in this type is exact.
    fn is_exact() -> bool;

    /// Writes the value in the crate's text form ("p/q" for rationals).
    fn fmt_scalar(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result;

    fn abs_value(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for BigRational {
    fn from_integer(n: BigInt) -> Self {
        BigRational::from_integer(n)
    }

    fn from_fraction(num: BigInt, den: BigInt) -> Self {
        BigRational::new(num, den)
    }

    fn to_f64(&self) -> f64 {
        // Ratio::to_f64 handles huge numerators/denominators without overflow.
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_exact() -> bool {
        true
    }

    fn fmt_scalar(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_integer(n: BigInt) -> Self {
                n.to_f64().unwrap_or(f64::NAN) as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn is_exact() -> bool {
                false
            }

            fn fmt_scalar(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{:?}", self)
            }

            fn abs_value(&self) -> Self {
                self.abs()
            }
        }
    };
}

float_scalar!(f64);
float_scalar!(f32);

/// Formats any scalar in its canonical text form.
pub struct DisplayScalar<'a, T>(pub &'a T);

impl<T: Scalar> fmt::Display for DisplayScalar<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_scalar(f)
    }
}

/// Exact "p/q" string of a rational; integers keep their "/1".
pub fn rational_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses "p/q" or "p" into a rational. Used for CLI flags and job files.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Integer power `base^exp` by repeated squaring.
pub fn pow<T: Scalar>(base: &T, mut exp: u32) -> T {
    let mut acc = T::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b.clone();
        }
        exp >>= 1;
        if exp > 0 {
            b = b.clone() * b;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_keeps_denominator() {
        let q = BigRational::from_integer(4.into());
        assert_eq!(rational_string(&q), "4/1");
        let q = BigRational::new((-6).into(), 8.into());
        assert_eq!(rational_string(&q), "-3/4");
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("3/6"), Some(BigRational::new(1.into(), 2.into())));
        assert_eq!(parse_rational(" 7 "), Some(BigRational::from_integer(7.into())));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("0.5"), None);
    }

    #[test]
    fn factorial_and_pow() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(10), BigInt::from(3_628_800));
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(pow(&half, 3), BigRational::new(1.into(), 8.into()));
        assert_eq!(pow(&3.0f64, 4), 81.0);
    }
}
