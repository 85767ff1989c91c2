//! Scalar traits the matrix and execution code is generic over.
//!
//! Exact arithmetic goes through [`Rational`] or [`ModularScalar`](crate::ModularScalar);
//! `f32`/`f64` implement the same traits so the execution paths can be reused, but none of
//! the exactness guarantees apply to them.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always stored in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// A commutative ring element usable as a matrix entry.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Image of an algorithm coefficient in this ring, `None` when it has no image
    /// (e.g. a denominator divisible by the characteristic).
    fn from_rational(c: &Rational) -> Option<Self>;

    fn from_i64(x: i64) -> Self;
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn checked_inv(&self) -> Option<Self>;
}

impl Ring for Rational {
    fn from_rational(c: &Rational) -> Option<Self> {
        Some(c.clone())
    }

    fn from_i64(x: i64) -> Self {
        Rational::from_integer(BigInt::from(x))
    }
}

impl Field for Rational {
    fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

macro_rules! impl_float {
    ($f:ty, $to:ident) => {
        impl Ring for $f {
            fn from_rational(c: &Rational) -> Option<Self> {
                c.$to()
            }

            fn from_i64(x: i64) -> Self {
                x as $f
            }
        }

        impl Field for $f {
            fn checked_inv(&self) -> Option<Self> {
                if *self == 0.0 {
                    None
                } else {
                    Some(1.0 / *self)
                }
            }
        }
    };
}

impl_float!(f32, to_f32);
impl_float!(f64, to_f64);

/// Builds a rational from a numerator/denominator pair, reducing to canonical form.
pub fn rational(num: i64, den: i64) -> crate::Result<Rational> {
    if den == 0 {
        return Err(crate::Error::DivisionByZero);
    }
    Ok(Rational::new(BigInt::from(num), BigInt::from(den)))
}

pub fn rational_int(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// Inverse of a rational; zero has none.
pub fn rational_inv(x: &Rational) -> crate::Result<Rational> {
    x.checked_inv().ok_or(crate::Error::DivisionByZero)
}

/// `p/q` with an explicit denominator, the coefficient spelling used in algorithm files.
pub fn format_fraction(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// True when `x` is one of the free coefficients 0, 1, -1.
pub fn is_unit_or_zero(x: &Rational) -> bool {
    x.is_integer() && x.numer().abs() <= BigInt::one()
}
