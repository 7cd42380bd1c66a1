use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficient field used by every algebraic routine in the crate.
///
/// Exact backends return `None` from the transcendental hooks unless the
/// answer is trivially exact (for instance `exp(0)` or a perfect square).
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn inv(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn sqrt(&self) -> Option<Self> {
        None
    }

    fn exp(&self) -> Option<Self> {
        self.is_zero().then(Self::one)
    }

    fn ln(&self) -> Option<Self> {
        self.is_one().then(Self::zero)
    }

    /// `self^e`; exact backends only handle integer `e` or a unit base.
    fn pow(&self, e: &Self) -> Option<Self> {
        if self.is_one() {
            return Some(Self::one());
        }
        let n = e.as_integer()?;
        Some(self.powi(n))
    }

    /// The value as an integer if it is one.
    fn as_integer(&self) -> Option<i64> {
        None
    }

    fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut k = n.unsigned_abs();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * &base;
            }
            base = base.clone() * &base;
            k >>= 1;
        }
        acc
    }

    fn square(&self) -> Self {
        self.clone() * self
    }

    fn scale_i64(&self, n: i64) -> Self {
        self.clone() * &Self::from_i64(n)
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(n: i64) -> Self {
        rat_int(n)
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn sqrt(&self) -> Option<Self> {
        Some(BigRational::new(isqrt(self.numer())?, isqrt(self.denom())?))
    }
    fn as_integer(&self) -> Option<i64> {
        if self.denom().is_one() {
            self.numer().to_i64()
        } else {
            None
        }
    }
    fn pow(&self, e: &Self) -> Option<Self> {
        if One::is_one(self) {
            return Some(One::one());
        }
        if let Some(n) = e.as_integer() {
            if n < 0 && Zero::is_zero(self) {
                return None;
            }
            return Some(Field::powi(self, n));
        }
        // rational exponent p/q: exact only for perfect q-th powers
        let q = e.denom().to_u32()?;
        let root_n = exact_root(self.numer(), q)?;
        let root_d = exact_root(self.denom(), q)?;
        let base = BigRational::new(root_n, root_d);
        let p = e.numer().to_i64()?;
        if p < 0 && Zero::is_zero(&base) {
            return None;
        }
        Some(Field::powi(&base, p))
    }
}

fn exact_root(n: &BigInt, q: u32) -> Option<BigInt> {
    if n.is_negative() {
        if q.is_multiple_of(2) {
            return None;
        }
        return exact_root(&-n, q).map(|r| -r);
    }
    let r = n.nth_root(q);
    (num_traits::pow(r.clone(), q as usize) == *n).then_some(r)
}

/// Binomial coefficient `binom(a, k)` for a field element `a`.
pub fn binomial<F: Field>(a: &F, k: usize) -> F {
    let mut acc = F::one();
    for j in 0..k {
        acc = acc * &(a.clone() - F::from_i64(j as i64));
    }
    let mut fact = F::one();
    for j in 1..=k {
        fact = fact.scale_i64(j as i64);
    }
    acc * &fact.inv().expect("factorial is nonzero")
}
