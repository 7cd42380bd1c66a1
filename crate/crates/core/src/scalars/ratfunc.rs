//! Univariate polynomials and rational functions in `ε` over ℚ.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;


use super::field::Field;

/// Dense polynomial, coefficients from `ε^0` upwards, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Field::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k];
        v.push(c);
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest exponent carrying a nonzero coefficient.
    pub fn ord(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn is_monomial(&self) -> bool {
        match self.ord() {
            Some(k) => k + 1 == self.coeffs.len(),
            None => false,
        }
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Divide by `ε^k`, assuming the low coefficients vanish.
    pub fn shift_down(&self, k: usize) -> Poly {
        Poly::new(self.coeffs[k.min(self.coeffs.len())..].to_vec())
    }

    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![BigRational::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            Some(l) if !l.is_one() => self.scale(&l.recip()),
            _ => self.clone(),
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv_lead = d.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &inv_lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    fn add_ref(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for k in 0..n {
            match (self.coeffs.get(k), o.coeffs.get(k)) {
                (Some(a), Some(b)) => v.push(a + b),
                (Some(a), None) => v.push(a.clone()),
                (None, Some(b)) => v.push(b.clone()),
                (None, None) => unreachable!(),
            }
        }
        Poly::new(v)
    }

    fn neg_ref(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    fn mul_ref(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Poly::new(v)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})e")?,
                _ => write!(f, "({c})e^{k}")?,
            }
        }
        Ok(())
    }
}

/// Reduced rational function `num/den` in `ε`, with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::reduce(num, den)
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::constant(BigRational::one()) }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// The indeterminate `ε`.
    pub fn eps() -> Self {
        Self::from_poly(Poly::monomial(BigRational::one(), 1))
    }

    /// `c · ε^k` for any integer `k`.
    pub fn eps_pow(c: BigRational, k: i64) -> Self {
        if k >= 0 {
            Self::from_poly(Poly::monomial(c, k as usize))
        } else {
            Self::reduce(Poly::constant(c), Poly::monomial(BigRational::one(), (-k) as usize))
        }
    }

    /// Laurent polynomial `Σ c_i ε^{lo+i}`.
    pub fn laurent(lo: i64, coeffs: &[BigRational]) -> Self {
        let p = Poly::new(coeffs.to_vec());
        if lo >= 0 {
            Self::from_poly(p.shift_up(lo as usize))
        } else {
            Self::reduce(p, Poly::monomial(BigRational::one(), (-lo) as usize))
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc { num, den: Poly::constant(BigRational::one()) };
        }
        let (num, den) = if den.degree() == Some(0) {
            (num, den)
        } else if den.is_monomial() {
            let k = den.ord().unwrap().min(num.ord().unwrap());
            (num.shift_down(k), den.shift_down(k))
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_rem(&g).0, den.div_rem(&g).0)
            }
        };
        let l = den.lead().unwrap().clone();
        if l.is_one() {
            RatFunc { num, den }
        } else {
            let inv = l.recip();
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// ε-adic valuation; `None` for the zero function.
    pub fn valuation(&self) -> Option<i64> {
        Some(self.num.ord()? as i64 - self.den.ord().unwrap() as i64)
    }

    /// The `ε^0` coefficient of the Laurent expansion, if the valuation is nonnegative.
    pub fn limit(&self) -> Option<BigRational> {
        match self.valuation() {
            None => Some(BigRational::zero()),
            Some(v) if v > 0 => Some(BigRational::zero()),
            Some(0) => {
                let on = self.num.ord().unwrap();
                let od = self.den.ord().unwrap();
                Some(&self.num.coeffs()[on] / &self.den.coeffs()[od])
            }
            Some(_) => None,
        }
    }

    /// Laurent coefficients from `ε^{valuation}` up to `ε^{hi}` inclusive.
    pub fn laurent_coeffs(&self, hi: i64) -> (i64, Vec<BigRational>) {
        let Some(v) = self.valuation() else { return (0, Vec::new()) };
        let od = self.den.ord().unwrap();
        let on = self.num.ord().unwrap();
        let n = self.num.shift_down(on);
        let d = self.den.shift_down(od);
        let count = if hi < v { 0 } else { (hi - v + 1) as usize };
        let d0inv = d.coeff(0).recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(count);
        for k in 0..count {
            let mut acc = n.coeff(k);
            for j in 1..=k.min(d.degree().unwrap_or(0)) {
                acc -= d.coeff(j) * &out[k - j];
            }
            out.push(acc * &d0inv);
        }
        (v, out)
    }

    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    fn add_ref(&self, o: &RatFunc) -> RatFunc {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::reduce(self.num.add_ref(&o.num), self.den.clone());
        }
        if self.den.is_monomial() && o.den.is_monomial() {
            let a = self.den.degree().unwrap();
            let b = o.den.degree().unwrap();
            let m = a.max(b);
            let num = self.num.shift_up(m - a).add_ref(&o.num.shift_up(m - b));
            return Self::reduce(num, Poly::monomial(BigRational::one(), m));
        }
        let g = self.den.gcd(&o.den);
        let (sd, od) = if g.is_one() {
            (self.den.clone(), o.den.clone())
        } else {
            (self.den.div_rem(&g).0, o.den.div_rem(&g).0)
        };
        let num = self.num.mul_ref(&od).add_ref(&o.num.mul_ref(&sd));
        Self::reduce(num, sd.mul_ref(&o.den))
    }

    fn mul_ref(&self, o: &RatFunc) -> RatFunc {
        if self.num.is_zero() || o.num.is_zero() {
            return RatFunc::zero_fn();
        }
        if self.is_polynomial() && o.is_polynomial() {
            return RatFunc {
                num: self.num.mul_ref(&o.num).scale(&(self.den.coeff(0) * o.den.coeff(0)).recip()),
                den: Poly::constant(BigRational::one()),
            };
        }
        let monomial_dens = self.den.is_monomial() && o.den.is_monomial();
        if monomial_dens {
            return Self::reduce(self.num.mul_ref(&o.num), self.den.mul_ref(&o.den));
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let (a, d) = if g1.is_one() {
            (self.num.clone(), o.den.clone())
        } else {
            (self.num.div_rem(&g1).0, o.den.div_rem(&g1).0)
        };
        let (c, b) = if g2.is_one() {
            (o.num.clone(), self.den.clone())
        } else {
            (o.num.div_rem(&g2).0, self.den.div_rem(&g2).0)
        };
        let num = a.mul_ref(&c);
        let den = b.mul_ref(&d);
        let l = den.lead().unwrap().recip();
        RatFunc { num: num.scale(&l), den: den.scale(&l) }
    }

    fn zero_fn() -> RatFunc {
        RatFunc { num: Poly::zero(), den: Poly::constant(BigRational::one()) }
    }

    pub fn recip(&self) -> Option<RatFunc> {
        if self.num.is_zero() {
            return None;
        }
        Some(Self::reduce(self.den.clone(), self.num.clone()))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() && self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

macro_rules! forward_ops {
    ($t:ty, $add:ident, $mul:ident) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                self.$add(&o)
            }
        }
        impl<'a> Add<&'a $t> for $t {
            type Output = $t;
            fn add(self, o: &'a $t) -> $t {
                self.$add(o)
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                self.$add(&-o)
            }
        }
        impl<'a> Sub<&'a $t> for $t {
            type Output = $t;
            fn sub(self, o: &'a $t) -> $t {
                self.$add(&-o.clone())
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                self.$mul(&o)
            }
        }
        impl<'a> Mul<&'a $t> for $t {
            type Output = $t;
            fn mul(self, o: &'a $t) -> $t {
                self.$mul(o)
            }
        }
    };
}

forward_ops!(Poly, add_ref, mul_ref);
forward_ops!(RatFunc, add_ref, mul_ref);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_ref()
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: self.num.neg_ref(), den: self.den }
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    fn div(self, o: RatFunc) -> RatFunc {
        self.mul_ref(&o.recip().expect("division by zero rational function"))
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::zero_fn()
    }
    fn one() -> Self {
        RatFunc::constant(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    fn from_i64(n: i64) -> Self {
        RatFunc::constant(super::field::rat_int(n))
    }
    fn from_rational(q: &BigRational) -> Self {
        RatFunc::constant(q.clone())
    }
    fn inv(&self) -> Option<Self> {
        self.recip()
    }
    fn as_integer(&self) -> Option<i64> {
        if self.num.degree().unwrap_or(0) == 0 && self.den.is_one() {
            self.num.coeff(0).as_integer()
        } else {
            None
        }
    }
    fn sqrt(&self) -> Option<Self> {
        if self.num.degree().unwrap_or(0) == 0 && self.den.is_one() {
            Field::sqrt(&self.num.coeff(0)).map(RatFunc::constant)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::field::rat;

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| rat(x, 1)).collect())
    }

    #[test]
    fn reduces_common_factor() {
        let f = RatFunc::new(p(&[1, 0, -1]), p(&[1, -1]));
        assert_eq!(f, RatFunc::from_poly(p(&[1, 1])));
        assert_eq!(f.limit(), Some(rat(1, 1)));
    }

    #[test]
    fn valuation_of_pole() {
        let f = RatFunc::eps_pow(rat(1, 1), -1);
        assert_eq!(f.valuation(), Some(-1));
        assert_eq!(f.limit(), None);
    }

    #[test]
    fn laurent_expansion_of_geometric() {
        let f = RatFunc::new(p(&[1]), p(&[1, -1]));
        let (v, c) = f.laurent_coeffs(3);
        assert_eq!(v, 0);
        assert_eq!(c, vec![rat(1, 1); 4]);
    }

    #[test]
    fn monic_denominator() {
        let f = RatFunc::new(p(&[1]), p(&[0, 2]));
        assert_eq!(f.den(), &p(&[0, 1]));
        assert_eq!(f.num(), &Poly::constant(rat(1, 2)));
    }
}
