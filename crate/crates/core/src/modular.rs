//! Prime fields GF(p) for randomized identity testing.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::scalar::{parse_rational, Field, Rational, Ring};
use crate::{Error, Result};

/// 2^61 - 1.
pub const MERSENNE_61: u64 = (1 << 61) - 1;
/// 2^31 - 1.
pub const MERSENNE_31: u64 = (1 << 31) - 1;

const fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

const fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit integers.
pub const fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let mut i = 0;
    while i < WITNESSES.len() {
        let w = WITNESSES[i];
        if n == w {
            return true;
        }
        if n.is_multiple_of(w) {
            return false;
        }
        i += 1;
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    let mut i = 0;
    'witness: while i < WITNESSES.len() {
        let mut x = pow_mod(WITNESSES[i], d, n);
        i += 1;
        if x == 1 || x == n - 1 {
            continue;
        }
        let mut j = 1;
        while j < r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
            j += 1;
        }
        return false;
    }
    true
}

fn reduce_bigint(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64")
}

/// A prime field whose modulus is chosen at run time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadField(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.p as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.p - b)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a.is_multiple_of(self.p) {
            return Err(Error::DivisionByZero);
        }
        Ok(pow_mod(a, self.p - 2, self.p))
    }

    pub fn from_rational(&self, c: &Rational) -> Result<u64> {
        let num = reduce_bigint(c.numer(), self.p);
        let den = reduce_bigint(c.denom(), self.p);
        let den_inv = self
            .inv(den)
            .map_err(|_| Error::Coefficient(format!("{c} (denominator vanishes mod {})", self.p)))?;
        Ok(self.mul(num, den_inv))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
}

/// An element of GF(`P`). `P` is checked for primality at compile time.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ModularScalar<const P: u64> {
    value: u64,
}

impl<const P: u64> ModularScalar<P> {
    const PRIME_MODULUS: () = assert!(is_prime(P), "modulus must be prime");

    pub fn new(value: u64) -> Self {
        #[allow(clippy::let_unit_value)]
        let () = Self::PRIME_MODULUS;
        ModularScalar { value: value % P }
    }

    pub fn from_i64(x: i64) -> Self {
        Self::new(x.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub const fn modulus() -> u64 {
        P
    }

    pub fn pow(self, exp: u64) -> Self {
        Self::new(pow_mod(self.value, exp, P))
    }

    pub fn inv(self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(P - 2))
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::new(rng.gen_range(0..P))
    }
}

impl<const P: u64> fmt::Debug for ModularScalar<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, P)
    }
}

impl<const P: u64> fmt::Display for ModularScalar<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl<const P: u64> Add for ModularScalar<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(((self.value as u128 + rhs.value as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Sub for ModularScalar<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const P: u64> Neg for ModularScalar<P> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.value == 0 {
            self
        } else {
            Self::new(P - self.value)
        }
    }
}

impl<const P: u64> Mul for ModularScalar<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(mul_mod(self.value, rhs.value, P))
    }
}

impl<const P: u64> Zero for ModularScalar<P> {
    fn zero() -> Self {
        Self::new(0)
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl<const P: u64> One for ModularScalar<P> {
    fn one() -> Self {
        Self::new(1)
    }
}

impl<const P: u64> Ring for ModularScalar<P> {
    fn from_rational(c: &Rational) -> Option<Self> {
        let num = Self::new(reduce_bigint(c.numer(), P));
        let den = Self::new(reduce_bigint(c.denom(), P));
        den.inv().ok().map(|d| num * d)
    }

    fn from_i64(x: i64) -> Self {
        ModularScalar::from_i64(x)
    }
}

impl<const P: u64> Field for ModularScalar<P> {
    fn checked_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
}

impl<const P: u64> FromStr for ModularScalar<P> {
    type Err = Error;

    /// Accepts integers and `p/q` fractions, reduced into the field.
    fn from_str(s: &str) -> Result<Self> {
        let r = parse_rational(s).ok_or_else(|| Error::BadArgument(format!("not a number: {s}")))?;
        <Self as Ring>::from_rational(&r).ok_or_else(|| Error::Coefficient(r.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    type F7 = ModularScalar<7>;

    #[test]
    fn product_reduces() {
        assert_eq!(F7::new(3) * F7::new(5), F7::new(1));
        assert_eq!(F7::from_i64(-1), F7::new(6));
        assert_eq!(F7::new(3).inv().unwrap(), F7::new(5));
        assert_eq!(F7::new(0).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(MERSENNE_61));
        assert!(is_prime(MERSENNE_31));
        // Carmichael number and a strong pseudoprime to several small bases
        assert!(!is_prime(561));
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(MERSENNE_61 - 2));
    }

    #[test]
    fn runtime_field() {
        assert!(matches!(PrimeField::new(15), Err(Error::BadField(_))));
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.sub(2, 5), 4);
        assert_eq!(f.from_rational(&rational(1, 2).unwrap()).unwrap(), 4);
        assert!(matches!(
            f.from_rational(&rational(1, 7).unwrap()),
            Err(Error::Coefficient(_))
        ));
    }

    #[test]
    fn rational_images() {
        assert_eq!(F7::from_rational(&rational(-1, 2).unwrap()), Some(F7::new(3)));
        assert_eq!(F7::from_rational(&rational(1, 14).unwrap()), None);
        assert_eq!("3/2".parse::<F7>().unwrap(), F7::new(5));
    }
}
