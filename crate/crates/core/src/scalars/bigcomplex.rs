//! Arbitrary-precision complex numbers on top of `astro-float`.
//!
//! Precision is a per-thread setting in decimal digits (default 50); values
//! created while a setting is active carry that many bits plus guard bits.

use std::cell::{Cell, RefCell};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_rational::BigRational;
use num_traits::Signed;

use super::field::Field;

const RM: RoundingMode = RoundingMode::ToEven;
const GUARD_BITS: usize = 64;
pub const MIN_DIGITS: usize = 50;

thread_local! {
    static DIGITS: Cell<usize> = const { Cell::new(MIN_DIGITS) };
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

pub fn digits() -> usize {
    DIGITS.with(|d| d.get())
}

/// Set the working precision of the current thread; values below 50 are raised to 50.
pub fn set_digits(d: usize) {
    DIGITS.with(|c| c.set(d.max(MIN_DIGITS)));
}

/// Run `f` with a temporary working precision.
pub fn with_digits<T>(d: usize, f: impl FnOnce() -> T) -> T {
    let old = digits();
    set_digits(d);
    let out = f();
    set_digits(old);
    out
}

pub fn precision_bits() -> usize {
    (digits() as f64 * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

fn bf_zero() -> BigFloat {
    BigFloat::from_word(0, precision_bits())
}

fn bf_from_bigint_str(s: &str) -> BigFloat {
    let p = precision_bits();
    with_consts(|cc| BigFloat::parse(s, Radix::Dec, p, RM, cc))
}

pub fn bf_from_rational(q: &BigRational) -> BigFloat {
    let p = precision_bits();
    let n = bf_from_bigint_str(&q.numer().to_string());
    let d = bf_from_bigint_str(&q.denom().to_string());
    n.div(&d, p, RM)
}

/// Complex number `re + i·im`.
#[derive(Clone)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn real(re: BigFloat) -> Self {
        BigComplex { re, im: bf_zero() }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        let p = precision_bits();
        BigComplex { re: BigFloat::from_f64(re, p), im: BigFloat::from_f64(im, p) }
    }

    pub fn from_rationals(re: &BigRational, im: &BigRational) -> Self {
        BigComplex { re: bf_from_rational(re), im: bf_from_rational(im) }
    }

    /// Parse decimal strings such as `"1.25"` or `"-3e-4"`.
    pub fn parse(re: &str, im: &str) -> Option<Self> {
        let p = precision_bits();
        let (a, b) = with_consts(|cc| {
            (BigFloat::parse(re, Radix::Dec, p, RM, cc), BigFloat::parse(im, Radix::Dec, p, RM, cc))
        });
        (!a.is_nan() && !b.is_nan()).then_some(BigComplex { re: a, im: b })
    }

    pub fn i() -> Self {
        BigComplex { re: bf_zero(), im: BigFloat::from_word(1, precision_bits()) }
    }

    pub fn pi() -> Self {
        let p = precision_bits();
        BigComplex::real(with_consts(|cc| cc.pi(p, RM)))
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: self.im.clone().neg() }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let p = precision_bits();
        self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt(precision_bits(), RM)
    }

    pub fn abs_f64(&self) -> f64 {
        bf_to_f64(&self.abs())
    }

    /// log10 of the modulus, `-inf` for zero.
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero_value() {
            return f64::NEG_INFINITY;
        }
        let p = precision_bits();
        let n = self.norm_sqr();
        let ten = BigFloat::from_word(10, p);
        let l = with_consts(|cc| n.log(&ten, p, RM, cc));
        bf_to_f64(&l) / 2.0
    }

    pub fn is_zero_value(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Principal argument in (-π, π].
    pub fn arg(&self) -> BigFloat {
        let p = precision_bits();
        if self.re.is_zero() && self.im.is_zero() {
            return bf_zero();
        }
        with_consts(|cc| {
            let pi = cc.pi(p, RM);
            if self.re.is_zero() {
                let half = pi.div(&BigFloat::from_word(2, p), p, RM);
                return if self.im.is_negative() { half.neg() } else { half };
            }
            let a = self.im.div(&self.re, p, RM).atan(p, RM, cc);
            if self.re.is_positive() {
                a
            } else if self.im.is_negative() {
                a.sub(&pi, p, RM)
            } else {
                a.add(&pi, p, RM)
            }
        })
    }

    pub fn exp_c(&self) -> Self {
        let p = precision_bits();
        with_consts(|cc| {
            let r = self.re.exp(p, RM, cc);
            let c = self.im.cos(p, RM, cc);
            let s = self.im.sin(p, RM, cc);
            BigComplex { re: r.mul(&c, p, RM), im: r.mul(&s, p, RM) }
        })
    }

    /// Principal logarithm.
    pub fn ln_c(&self) -> Option<Self> {
        if self.is_zero_value() {
            return None;
        }
        let p = precision_bits();
        let two = BigFloat::from_word(2, p);
        let re = with_consts(|cc| self.norm_sqr().ln(p, RM, cc)).div(&two, p, RM);
        Some(BigComplex { re, im: self.arg() })
    }

    /// Principal power `exp(e · ln self)`; `0^e` is 0 for e with positive real part.
    pub fn pow_c(&self, e: &Self) -> Option<Self> {
        if self.is_zero_value() {
            return if e.is_zero_value() {
                Some(Field::one())
            } else if e.re.is_positive() {
                Some(Field::zero())
            } else {
                None
            };
        }
        Some((self.ln_c()? * e).exp_c())
    }

    pub fn powi_c(&self, n: i64) -> Self {
        Field::powi(self, n)
    }

    pub fn sqrt_c(&self) -> Self {
        if self.is_zero_value() {
            return self.clone();
        }
        let half = BigComplex::from_f64(0.5, 0.0);
        self.pow_c(&half).unwrap()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (bf_to_f64(&self.re), bf_to_f64(&self.im))
    }

    /// Decimal rendering of one component with `d` significant digits.
    pub fn component_string(x: &BigFloat, d: usize) -> String {
        bf_to_string(x, d)
    }

    fn mul_ref(&self, o: &Self) -> Self {
        let p = precision_bits();
        let ac = self.re.mul(&o.re, p, RM);
        let bd = self.im.mul(&o.im, p, RM);
        let ad = self.re.mul(&o.im, p, RM);
        let bc = self.im.mul(&o.re, p, RM);
        BigComplex { re: ac.sub(&bd, p, RM), im: ad.add(&bc, p, RM) }
    }

    fn add_ref(&self, o: &Self) -> Self {
        let p = precision_bits();
        BigComplex { re: self.re.add(&o.re, p, RM), im: self.im.add(&o.im, p, RM) }
    }

    fn sub_ref(&self, o: &Self) -> Self {
        let p = precision_bits();
        BigComplex { re: self.re.sub(&o.re, p, RM), im: self.im.sub(&o.im, p, RM) }
    }

    fn recip_c(&self) -> Option<Self> {
        if self.is_zero_value() {
            return None;
        }
        let p = precision_bits();
        let n = self.norm_sqr();
        Some(BigComplex { re: self.re.div(&n, p, RM), im: self.im.clone().neg().div(&n, p, RM) })
    }

    pub fn scale_f(&self, x: &BigFloat) -> Self {
        let p = precision_bits();
        BigComplex { re: self.re.mul(x, p, RM), im: self.im.mul(x, p, RM) }
    }
}

pub fn bf_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    bf_to_string(x, 20).parse::<f64>().unwrap_or(f64::NAN)
}

fn bf_to_string(x: &BigFloat, d: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let bits = ((d as f64) * std::f64::consts::LOG2_10).ceil() as usize + 8;
    let mut y = x.clone();
    let _ = y.set_precision(bits.max(64), RM);
    let s = with_consts(|cc| y.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into());
    trim_mantissa(&s, d)
}

fn trim_mantissa(s: &str, d: usize) -> String {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], &s[i..]),
        None => (s, ""),
    };
    let (sign, body) = mant.strip_prefix('-').map(|b| ("-", b)).unwrap_or(("", mant));
    let mut out = String::from(sign);
    let mut count = 0;
    for ch in body.chars() {
        if ch.is_ascii_digit() {
            if count >= d {
                continue;
            }
            count += 1;
        }
        out.push(ch);
    }
    if out.ends_with('.') {
        out.pop();
    }
    out + exp
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(20);
        write!(f, "({}, {})", bf_to_string(&self.re, d), bf_to_string(&self.im, d))
    }
}

impl PartialEq for BigComplex {
    fn eq(&self, o: &Self) -> bool {
        self.re.cmp(&o.re) == Some(0) && self.im.cmp(&o.im) == Some(0)
    }
}

impl Add for BigComplex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.add_ref(&o)
    }
}
impl<'a> Add<&'a BigComplex> for BigComplex {
    type Output = Self;
    fn add(self, o: &'a Self) -> Self {
        self.add_ref(o)
    }
}
impl Sub for BigComplex {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.sub_ref(&o)
    }
}
impl<'a> Sub<&'a BigComplex> for BigComplex {
    type Output = Self;
    fn sub(self, o: &'a Self) -> Self {
        self.sub_ref(o)
    }
}
impl Mul for BigComplex {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_ref(&o)
    }
}
impl<'a> Mul<&'a BigComplex> for BigComplex {
    type Output = Self;
    fn mul(self, o: &'a Self) -> Self {
        self.mul_ref(o)
    }
}
impl Div for BigComplex {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self.mul_ref(&o.recip_c().expect("complex division by zero"))
    }
}
impl Neg for BigComplex {
    type Output = Self;
    fn neg(self) -> Self {
        BigComplex { re: self.re.neg(), im: self.im.clone().neg() }
    }
}

impl Field for BigComplex {
    fn zero() -> Self {
        BigComplex { re: bf_zero(), im: bf_zero() }
    }
    fn one() -> Self {
        BigComplex::real(BigFloat::from_word(1, precision_bits()))
    }
    fn is_zero(&self) -> bool {
        self.is_zero_value()
    }
    fn from_i64(n: i64) -> Self {
        let p = precision_bits();
        let mut x = BigFloat::from_word(n.unsigned_abs(), p);
        if n < 0 {
            x.set_sign(Sign::Neg);
        }
        BigComplex::real(x)
    }
    fn from_rational(q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        if q.is_integer() && q.numer().abs() < num_bigint::BigInt::from(i64::MAX) {
            return Self::from_i64(q.numer().try_into().unwrap());
        }
        BigComplex::real(bf_from_rational(q))
    }
    fn inv(&self) -> Option<Self> {
        self.recip_c()
    }
    fn sqrt(&self) -> Option<Self> {
        Some(self.sqrt_c())
    }
    fn exp(&self) -> Option<Self> {
        Some(self.exp_c())
    }
    fn ln(&self) -> Option<Self> {
        self.ln_c()
    }
    fn pow(&self, e: &Self) -> Option<Self> {
        self.pow_c(e)
    }
}
