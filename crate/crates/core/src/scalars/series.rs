//! Prefactored series `x^α exp(Σ β_i x^{-i}) Σ c_k x^k`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::bigcomplex::BigComplex;
use super::field::{binomial, Field};
use super::ratfunc::RatFunc;
use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("prefactor mismatch: addition needs equal exponent and charges")]
    PrefactorMismatch,
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("operation not representable in this coefficient field: {0}")]
    NotRepresentable(String),
    #[error("binary operation needs a second operand")]
    MissingOperand,
    #[error("evaluation at x = 0")]
    EvaluationAtZero,
    #[error("negative valuation {order} at coefficient {index}")]
    NegativeValuation { index: String, order: i64 },
}

/// `x^alpha · exp(Σ_i betas[i-1] x^{-i}) · Σ_k coeffs[k] x^k + O(x^{alpha+N+1})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrefactoredSeries<F, C = F> {
    pub alpha: F,
    pub betas: Vec<F>,
    pub coeffs: Vec<C>,
}

#[derive(Debug, Clone)]
pub enum SeriesOp<F> {
    Add,
    Mul,
    Div,
    Pow(F),
    Exp,
    Log,
}

impl<F: Field, C> PrefactoredSeries<F, C> {
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn map<D>(&self, f: impl FnMut(&C) -> D) -> PrefactoredSeries<F, D> {
        PrefactoredSeries {
            alpha: self.alpha.clone(),
            betas: self.betas.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    fn same_prefactor<D>(&self, o: &PrefactoredSeries<F, D>) -> bool {
        if self.alpha != o.alpha {
            return false;
        }
        let n = self.betas.len().max(o.betas.len());
        (0..n).all(|i| {
            let a = self.betas.get(i).cloned().unwrap_or_else(F::zero);
            let b = o.betas.get(i).cloned().unwrap_or_else(F::zero);
            a == b
        })
    }
}

fn add_betas<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let n = a.len().max(b.len());
    let mut out: Vec<F> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(F::zero);
            let y = b.get(i).cloned().unwrap_or_else(F::zero);
            x + y
        })
        .collect();
    while out.last().is_some_and(|x| x.is_zero()) {
        out.pop();
    }
    out
}

impl<F: Field> PrefactoredSeries<F> {
    pub fn plain(coeffs: Vec<F>) -> Self {
        PrefactoredSeries { alpha: F::zero(), betas: Vec::new(), coeffs }
    }

    pub fn one(order: usize) -> Self {
        let mut c = vec![F::zero(); order + 1];
        c[0] = F::one();
        Self::plain(c)
    }

    /// `(1 + s·x)^a` truncated at `order`.
    pub fn binomial_series(s: &F, a: &F, order: usize) -> Self {
        let mut c = Vec::with_capacity(order + 1);
        let mut sp = F::one();
        for k in 0..=order {
            c.push(binomial(a, k) * &sp);
            sp = sp * s;
        }
        Self::plain(c)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut s = self.clone();
        s.coeffs.truncate(order + 1);
        s
    }

    pub fn is_plain(&self) -> bool {
        self.alpha.is_zero() && self.betas.iter().all(|b| b.is_zero())
    }

    pub fn add(&self, o: &Self) -> Result<Self, SeriesError> {
        if !self.same_prefactor(o) {
            return Err(SeriesError::PrefactorMismatch);
        }
        let n = self.coeffs.len().min(o.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeffs[k].clone() + &o.coeffs[k]).collect();
        Ok(PrefactoredSeries { alpha: self.alpha.clone(), betas: self.betas.clone(), coeffs })
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.coeffs.len().min(o.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                let mut acc = F::zero();
                for j in 0..=k {
                    if !self.coeffs[j].is_zero() && !o.coeffs[k - j].is_zero() {
                        acc = acc + self.coeffs[j].clone() * &o.coeffs[k - j];
                    }
                }
                acc
            })
            .collect();
        PrefactoredSeries {
            alpha: self.alpha.clone() + &o.alpha,
            betas: add_betas(&self.betas, &o.betas),
            coeffs,
        }
    }

    /// Multiplicative inverse of the power-series part.
    fn inverse_tail(c: &[F]) -> Result<Vec<F>, SeriesError> {
        let inv0 = c.first().and_then(|x| x.inv()).ok_or(SeriesError::ZeroLeadingCoefficient)?;
        let mut out: Vec<F> = Vec::with_capacity(c.len());
        out.push(inv0.clone());
        for k in 1..c.len() {
            let mut acc = F::zero();
            for j in 1..=k {
                acc = acc + c[j].clone() * &out[k - j];
            }
            out.push(-(acc * &inv0));
        }
        Ok(out)
    }

    pub fn div(&self, o: &Self) -> Result<Self, SeriesError> {
        let inv = Self::inverse_tail(&o.coeffs)?;
        let neg_betas: Vec<F> = o.betas.iter().map(|b| -b.clone()).collect();
        let r = PrefactoredSeries { alpha: -o.alpha.clone(), betas: neg_betas, coeffs: inv };
        Ok(self.mul(&r))
    }

    /// Derivative of the power-series part only.
    fn tail_derivative(c: &[F]) -> Vec<F> {
        (1..c.len()).map(|k| c[k].scale_i64(k as i64)).collect()
    }

    /// log of a plain series with unit-like leading coefficient.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.is_plain() {
            return Err(SeriesError::NotRepresentable("log of a prefactored series".into()));
        }
        let c0 = self.coeffs.first().ok_or(SeriesError::ZeroLeadingCoefficient)?;
        if c0.is_zero() {
            return Err(SeriesError::ZeroLeadingCoefficient);
        }
        let l0 = c0.ln().ok_or_else(|| SeriesError::NotRepresentable("log of leading coefficient".into()))?;
        let n = self.coeffs.len();
        let inv = Self::inverse_tail(&self.coeffs)?;
        let d = Self::tail_derivative(&self.coeffs);
        let mut out = vec![l0];
        for k in 1..n {
            // k·out_k = Σ_{j<k} d_j inv_{k-1-j}
            let mut acc = F::zero();
            for j in 0..k {
                acc = acc + d[j].clone() * &inv[k - 1 - j];
            }
            out.push(acc * &F::from_i64(k as i64).inv().unwrap());
        }
        Ok(Self::plain(out))
    }

    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.is_plain() {
            return Err(SeriesError::NotRepresentable("exp of a prefactored series".into()));
        }
        let n = self.coeffs.len();
        if n == 0 {
            return Ok(self.clone());
        }
        let e0 = self.coeffs[0]
            .exp()
            .ok_or_else(|| SeriesError::NotRepresentable("exp of leading coefficient".into()))?;
        let d = Self::tail_derivative(&self.coeffs);
        let mut out = vec![e0];
        for k in 1..n {
            let mut acc = F::zero();
            for j in 0..k {
                acc = acc + d[j].clone() * &out[k - 1 - j];
            }
            out.push(acc * &F::from_i64(k as i64).inv().unwrap());
        }
        Ok(Self::plain(out))
    }

    pub fn pow(&self, a: &F) -> Result<Self, SeriesError> {
        let c0 = self.coeffs.first().ok_or(SeriesError::ZeroLeadingCoefficient)?;
        if c0.is_zero() {
            return Err(SeriesError::ZeroLeadingCoefficient);
        }
        let lead = c0
            .pow(a)
            .ok_or_else(|| SeriesError::NotRepresentable("power of leading coefficient".into()))?;
        let inv0 = c0.inv().unwrap();
        let unit: Vec<F> = self.coeffs.iter().map(|c| c.clone() * &inv0).collect();
        let l = Self::plain(unit).log()?;
        let scaled = Self::plain(l.coeffs.iter().map(|c| c.clone() * a).collect());
        let e = scaled.exp()?;
        Ok(PrefactoredSeries {
            alpha: self.alpha.clone() * a,
            betas: self.betas.iter().map(|b| b.clone() * a).collect(),
            coeffs: e.coeffs.into_iter().map(|c| c * &lead).collect(),
        })
    }
}

/// Apply a series operation; `b` is required for the binary operations.
pub fn series_combine<F: Field>(
    op: &SeriesOp<F>,
    a: &PrefactoredSeries<F>,
    b: Option<&PrefactoredSeries<F>>,
) -> Result<PrefactoredSeries<F>, SeriesError> {
    match op {
        SeriesOp::Add => a.add(b.ok_or(SeriesError::MissingOperand)?),
        SeriesOp::Mul => Ok(a.mul(b.ok_or(SeriesError::MissingOperand)?)),
        SeriesOp::Div => a.div(b.ok_or(SeriesError::MissingOperand)?),
        SeriesOp::Pow(e) => a.pow(e),
        SeriesOp::Exp => a.exp(),
        SeriesOp::Log => a.log(),
    }
}

/// Field elements that can be evaluated numerically.
pub trait Numeric: Field {
    fn to_complex(&self) -> BigComplex;
}

impl Numeric for BigRational {
    fn to_complex(&self) -> BigComplex {
        BigComplex::from_rational(self)
    }
}

impl Numeric for BigComplex {
    fn to_complex(&self) -> BigComplex {
        self.clone()
    }
}

/// Value of the truncated series at `x0`, with the modulus of the last kept term.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: BigComplex,
    pub last_term: BigComplex,
}

impl Evaluation {
    pub fn last_term_magnitude(&self) -> f64 {
        self.last_term.abs_f64()
    }
}

pub fn evaluate<F: Numeric>(s: &PrefactoredSeries<F>, x0: &BigComplex) -> Result<Evaluation, SeriesError> {
    if x0.is_zero_value() {
        return Err(SeriesError::EvaluationAtZero);
    }
    let pref = prefactor_value(&s.alpha.to_complex(), &s.betas.iter().map(|b| b.to_complex()).collect::<Vec<_>>(), x0)?;
    let mut sum = BigComplex::zero();
    let mut xp = BigComplex::one();
    let mut last = BigComplex::zero();
    for c in &s.coeffs {
        last = c.to_complex() * &xp;
        sum = sum + &last;
        xp = xp * x0;
    }
    Ok(Evaluation { value: pref.clone() * &sum, last_term: pref * &last })
}

fn prefactor_value(alpha: &BigComplex, betas: &[BigComplex], x0: &BigComplex) -> Result<BigComplex, SeriesError> {
    let pw = x0.pow_c(alpha).ok_or(SeriesError::EvaluationAtZero)?;
    let xinv = x0.inv().ok_or(SeriesError::EvaluationAtZero)?;
    let mut e = BigComplex::zero();
    let mut xp = xinv.clone();
    for b in betas {
        e = e + b.clone() * &xp;
        xp = xp * &xinv;
    }
    Ok(pw * &e.exp_c())
}

/// Valuation and ε^0 part of a rational function.
pub fn eps_limit(f: &RatFunc) -> Result<(i64, BigRational), SeriesError> {
    match f.valuation() {
        None => Ok((i64::MAX, num_traits::Zero::zero())),
        Some(v) if v < 0 => Err(SeriesError::NegativeValuation { index: "scalar".into(), order: v }),
        Some(v) => Ok((v, f.limit().unwrap())),
    }
}

/// Coefficient-wise limit of a series over ε-rational functions.
pub fn eps_limit_series(
    s: &PrefactoredSeries<RatFunc>,
) -> Result<(i64, PrefactoredSeries<BigRational>), SeriesError> {
    let mut val = i64::MAX;
    let mut lim = |f: &RatFunc, name: String| -> Result<BigRational, SeriesError> {
        match f.valuation() {
            None => Ok(num_traits::Zero::zero()),
            Some(v) if v < 0 => Err(SeriesError::NegativeValuation { index: name, order: v }),
            Some(v) => {
                val = val.min(v);
                Ok(f.limit().unwrap())
            }
        }
    };
    let alpha = lim(&s.alpha, "alpha".into())?;
    let mut betas = Vec::new();
    for (i, b) in s.betas.iter().enumerate() {
        betas.push(lim(b, format!("beta_{}", i + 1))?);
    }
    let mut coeffs = Vec::new();
    for (k, c) in s.coeffs.iter().enumerate() {
        coeffs.push(lim(c, format!("c_{k}"))?);
    }
    Ok((val, PrefactoredSeries { alpha, betas, coeffs }))
}

/// `exp(Σ β_i x^{-i}) · Σ_j terms[j] x^{α + lo + j}`, closed under d/dx.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpSum<F> {
    pub alpha: F,
    pub betas: Vec<F>,
    pub lo: i64,
    pub terms: Vec<F>,
}

impl<F: Field> ExpSum<F> {
    pub fn from_series(s: &PrefactoredSeries<F>) -> Self {
        ExpSum { alpha: s.alpha.clone(), betas: s.betas.clone(), lo: 0, terms: s.coeffs.clone() }
    }

    pub fn derivative(&self) -> Self {
        let r = self.betas.len() as i64;
        let lo = self.lo - 1 - r;
        let mut terms = vec![F::zero(); self.terms.len() + r as usize];
        for (j, d) in self.terms.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let k = self.lo + j as i64;
            let e = self.alpha.clone() + F::from_i64(k);
            let idx = (k - 1 - lo) as usize;
            terms[idx] = terms[idx].clone() + e * d;
            for (i, b) in self.betas.iter().enumerate() {
                let i = i as i64 + 1;
                let idx = (k - i - 1 - lo) as usize;
                terms[idx] = terms[idx].clone() - b.scale_i64(i) * d;
            }
        }
        let mut out = ExpSum { alpha: self.alpha.clone(), betas: self.betas.clone(), lo, terms };
        out.trim();
        out
    }

    /// Multiply by `c · x^k`.
    pub fn mul_monomial(&self, c: &F, k: i64) -> Self {
        ExpSum {
            alpha: self.alpha.clone(),
            betas: self.betas.clone(),
            lo: self.lo + k,
            terms: self.terms.iter().map(|t| t.clone() * c).collect(),
        }
    }

    fn trim(&mut self) {
        let lead = self.terms.iter().take_while(|t| t.is_zero()).count();
        if lead == self.terms.len() {
            self.terms.clear();
            self.lo = 0;
            return;
        }
        self.terms.drain(..lead);
        self.lo += lead as i64;
        while self.terms.last().is_some_and(|t| t.is_zero()) {
            self.terms.pop();
        }
    }
}

impl<F: Numeric> ExpSum<F> {
    pub fn evaluate(&self, x0: &BigComplex) -> Result<BigComplex, SeriesError> {
        if x0.is_zero_value() {
            return Err(SeriesError::EvaluationAtZero);
        }
        let alpha = self.alpha.to_complex() + BigComplex::from_i64(self.lo);
        let betas: Vec<BigComplex> = self.betas.iter().map(|b| b.to_complex()).collect();
        let pref = prefactor_value(&alpha, &betas, x0)?;
        let mut sum = BigComplex::zero();
        let mut xp = BigComplex::one();
        for t in &self.terms {
            if !t.is_zero() {
                sum = sum + t.to_complex() * &xp;
            }
            xp = xp * x0;
        }
        Ok(pref * &sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::field::{rat, rat_int};

    #[test]
    fn exp_log_inverse_pair() {
        let mut c = vec![rat_int(0); 9];
        c[0] = rat_int(1);
        c[1] = rat_int(1);
        let s = PrefactoredSeries::plain(c.clone());
        let back = s.log().unwrap().exp().unwrap();
        assert_eq!(back.coeffs, c);
    }

    #[test]
    fn binomial_cancellation() {
        let a = rat(3, 7);
        let s = PrefactoredSeries::binomial_series(&rat_int(-1), &a, 6);
        let t = PrefactoredSeries::binomial_series(&rat_int(-1), &-a, 6);
        assert_eq!(s.mul(&t), PrefactoredSeries::one(6));
    }

    #[test]
    fn charge_cancellation() {
        let b = rat(2, 5);
        let s = PrefactoredSeries { alpha: rat(1, 2), betas: vec![b.clone()], coeffs: vec![rat_int(1)] };
        let t = PrefactoredSeries { alpha: rat(1, 2), betas: vec![-b], coeffs: vec![rat_int(1)] };
        let p = s.mul(&t);
        assert_eq!(p.alpha, rat_int(1));
        assert!(p.betas.is_empty());
        assert_eq!(p.coeffs, vec![rat_int(1)]);
    }

    #[test]
    fn derivative_of_monomial_with_charge() {
        // d/dx [x^2 e^{1/x}] = (2x - 1) e^{1/x}
        let s = PrefactoredSeries { alpha: rat_int(2), betas: vec![rat_int(1)], coeffs: vec![rat_int(1)] };
        let d = ExpSum::from_series(&s).derivative();
        assert_eq!(d.lo, -2);
        assert_eq!(d.terms, vec![rat_int(-1), rat_int(2)]);
    }
}
