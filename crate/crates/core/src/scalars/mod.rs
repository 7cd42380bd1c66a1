//! Coefficient fields, exact linear algebra and the prefactored-series algebra.

pub mod bigcomplex;
pub mod field;
pub mod linalg;
pub mod ratfunc;
pub mod series;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

pub use bigcomplex::BigComplex;
pub use field::{binomial, rat, rat_int, Field};
pub use ratfunc::{Poly, RatFunc};
pub use series::{eps_limit, eps_limit_series, evaluate, series_combine, ExpSum, Numeric, PrefactoredSeries, SeriesError, SeriesOp};

pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("cannot parse {0:?} as a rational number")]
    Parse(String),
    #[error("mixed backends: {0} and {1}")]
    BackendMismatch(&'static str, &'static str),
    #[error("malformed scalar JSON: {0}")]
    Json(String),
}

/// Parse `"p/q"`, an integer, or a decimal literal such as `"-0.125"` or `"3e-2"` exactly.
pub fn parse_rational(s: &str) -> Result<Q, ScalarError> {
    let t = s.trim();
    let err = || ScalarError::Parse(s.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, body) = match mant.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(err());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{ip}{fp}");
    let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| err())?;
    let scale = exp - fp.len() as i64;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

pub fn rational_to_string(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Conversion of backend values into the tagged [`Scalar`].
pub trait AsScalar {
    fn as_scalar(&self) -> Scalar;
}

impl AsScalar for Q {
    fn as_scalar(&self) -> Scalar {
        Scalar::Rat(self.clone())
    }
}

impl AsScalar for RatFunc {
    fn as_scalar(&self) -> Scalar {
        Scalar::Eps(self.clone())
    }
}

impl AsScalar for BigComplex {
    fn as_scalar(&self) -> Scalar {
        Scalar::Cplx { value: self.clone(), digits: bigcomplex::digits() }
    }
}

/// A coefficient value from one of the three backends.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rat(Q),
    Cplx { value: BigComplex, digits: usize },
    Eps(RatFunc),
}

impl Scalar {
    pub fn backend(&self) -> &'static str {
        match self {
            Scalar::Rat(_) => "rat",
            Scalar::Cplx { .. } => "cplx",
            Scalar::Eps(_) => "eps",
        }
    }

    pub fn as_rational(&self) -> Option<&Q> {
        match self {
            Scalar::Rat(q) => Some(q),
            _ => None,
        }
    }

    pub fn to_ratfunc(&self) -> Option<RatFunc> {
        match self {
            Scalar::Rat(q) => Some(RatFunc::constant(q.clone())),
            Scalar::Eps(f) => Some(f.clone()),
            Scalar::Cplx { .. } => None,
        }
    }

    pub fn to_complex(&self) -> Option<BigComplex> {
        match self {
            Scalar::Rat(q) => Some(BigComplex::from_rational(q)),
            Scalar::Cplx { value, .. } => Some(value.clone()),
            Scalar::Eps(_) => None,
        }
    }

    fn binary(
        &self,
        o: &Scalar,
        fq: impl Fn(Q, &Q) -> Q,
        fe: impl Fn(RatFunc, &RatFunc) -> RatFunc,
        fc: impl Fn(BigComplex, &BigComplex) -> BigComplex,
    ) -> Result<Scalar, ScalarError> {
        use Scalar::*;
        Ok(match (self, o) {
            (Rat(a), Rat(b)) => Rat(fq(a.clone(), b)),
            (Eps(_), Cplx { .. }) | (Cplx { .. }, Eps(_)) => {
                return Err(ScalarError::BackendMismatch(self.backend(), o.backend()))
            }
            (Eps(_), _) | (_, Eps(_)) => Eps(fe(self.to_ratfunc().unwrap(), &o.to_ratfunc().unwrap())),
            (Cplx { digits: d1, .. }, _) | (_, Cplx { digits: d1, .. }) => {
                let d = match (self, o) {
                    (Cplx { digits: a, .. }, Cplx { digits: b, .. }) => (*a).min(*b),
                    _ => *d1,
                };
                Cplx { value: fc(self.to_complex().unwrap(), &o.to_complex().unwrap()), digits: d }
            }
        })
    }

    pub fn try_add(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.binary(o, |a, b| a + b, |a, b| a + b, |a, b| a + b)
    }

    pub fn try_sub(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.binary(o, |a, b| a - b, |a, b| a - b, |a, b| a - b)
    }

    pub fn try_mul(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.binary(o, |a, b| a * b, |a, b| a * b, |a, b| a * b)
    }

    pub fn to_json(&self) -> Value {
        match self {
            Scalar::Rat(q) => json!({ "rat": rational_to_string(q) }),
            Scalar::Cplx { value, digits } => json!({
                "cplx": [BigComplex::component_string(&value.re, *digits), BigComplex::component_string(&value.im, *digits)],
                "digits": digits,
            }),
            Scalar::Eps(f) => json!({
                "eps": {
                    "num": f.num().coeffs().iter().map(rational_to_string).collect::<Vec<_>>(),
                    "den": f.den().coeffs().iter().map(rational_to_string).collect::<Vec<_>>(),
                }
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Scalar, ScalarError> {
        let bad = || ScalarError::Json(v.to_string());
        let obj = v.as_object().ok_or_else(bad)?;
        if let Some(r) = obj.get("rat") {
            if obj.len() != 1 {
                return Err(bad());
            }
            return Ok(Scalar::Rat(parse_value_rational(r)?));
        }
        if let Some(c) = obj.get("cplx") {
            let digits = obj.get("digits").and_then(Value::as_u64).unwrap_or(bigcomplex::MIN_DIGITS as u64) as usize;
            if obj.keys().any(|k| k != "cplx" && k != "digits") {
                return Err(bad());
            }
            let arr = c.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
            let s: Vec<String> = arr.iter().map(|x| value_to_literal(x).ok_or_else(bad)).collect::<Result<_, _>>()?;
            let value = bigcomplex::with_digits(digits, || BigComplex::parse(&s[0], &s[1])).ok_or_else(bad)?;
            return Ok(Scalar::Cplx { value, digits: digits.max(bigcomplex::MIN_DIGITS) });
        }
        if let Some(e) = obj.get("eps") {
            let eo = e.as_object().ok_or_else(bad)?;
            if obj.len() != 1 || eo.keys().any(|k| k != "num" && k != "den") {
                return Err(bad());
            }
            let poly = |key: &str| -> Result<Poly, ScalarError> {
                match eo.get(key) {
                    None if key == "den" => Ok(Poly::constant(<Q as Field>::one())),
                    None => Err(bad()),
                    Some(a) => {
                        let arr = a.as_array().ok_or_else(bad)?;
                        Ok(Poly::new(arr.iter().map(parse_value_rational).collect::<Result<_, _>>()?))
                    }
                }
            };
            let den = poly("den")?;
            if den.is_zero() {
                return Err(bad());
            }
            return Ok(Scalar::Eps(RatFunc::new(poly("num")?, den)));
        }
        Err(bad())
    }
}

fn value_to_literal(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

/// A JSON string or number read exactly as a rational.
pub fn parse_value_rational(v: &Value) -> Result<Q, ScalarError> {
    let s = value_to_literal(v).ok_or_else(|| ScalarError::Json(v.to_string()))?;
    parse_rational(&s)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(q) => write!(f, "{}", rational_to_string(q)),
            Scalar::Cplx { value, digits } => write!(f, "{value:.*}", *digits),
            Scalar::Eps(r) => write!(f, "{r}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Scalar::from_json(&v).map_err(D::Error::custom)
    }
}

/// Serde helper for exact rationals written as strings.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        rational_to_string(q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let v = Value::deserialize(d)?;
        parse_value_rational(&v).map_err(D::Error::custom)
    }
}
