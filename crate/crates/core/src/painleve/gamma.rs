//! Γ at arbitrary precision, and exact bookkeeping of Γ-products with rational arguments.

use std::cell::RefCell;
use std::collections::BTreeMap;

use num_traits::Signed;

use super::PainleveError;
use crate::scalars::bigcomplex::{bf_to_f64, digits, with_digits};
use crate::scalars::{rat, rational_to_string, BigComplex, Field, Q};

thread_local! {
    static SPOUGE: RefCell<Option<(usize, usize, Vec<BigComplex>)>> = const { RefCell::new(None) };
}

fn spouge_param(d: usize) -> usize {
    (d as f64 * 1.25).ceil() as usize + 2
}

/// `c_k = (-1)^{k-1} (a-k)^{k-1/2} e^{a-k} / (k-1)!` for `k = 1..a-1`, at the current precision.
fn spouge_coeffs(a: usize) -> Vec<BigComplex> {
    let d = digits();
    if let Some(c) = SPOUGE.with(|s| s.borrow().as_ref().filter(|(dd, aa, _)| *dd == d && *aa == a).map(|(_, _, c)| c.clone())) {
        return c;
    }
    let mut out = Vec::with_capacity(a);
    let mut fact = BigComplex::one();
    for k in 1..a {
        if k > 1 {
            fact = fact * &BigComplex::from_i64(k as i64 - 1);
        }
        let base = BigComplex::from_i64((a - k) as i64);
        let mut c = base.powi_c(k as i64 - 1) * &base.sqrt_c() * &BigComplex::from_i64((a - k) as i64).exp_c();
        c = c / fact.clone();
        out.push(if k % 2 == 1 { c } else { -c });
    }
    SPOUGE.with(|s| *s.borrow_mut() = Some((d, a, out.clone())));
    out
}

/// `Γ(w + 1)` for `Re w > -1/2`.
fn spouge(w: &BigComplex, a: usize) -> BigComplex {
    let c = spouge_coeffs(a);
    let two_pi = BigComplex::pi() * &BigComplex::from_i64(2);
    let mut sum = two_pi.sqrt_c();
    for (k, ck) in c.iter().enumerate() {
        sum = sum + ck.clone() / (w.clone() + BigComplex::from_i64(k as i64 + 1));
    }
    let wa = w.clone() + BigComplex::from_i64(a as i64);
    let half = BigComplex::from_rational(&rat(1, 2));
    let p = wa.pow_c(&(w.clone() + half)).expect("nonzero base");
    p * &(-wa).exp_c() * &sum
}

/// `Γ(z)` to the current working precision.
pub fn gamma(z: &BigComplex) -> Result<BigComplex, PainleveError> {
    let d = digits();
    let a = spouge_param(d);
    let out = with_digits(d + a, || {
        let z = z.clone() + BigComplex::zero();
        if bf_to_f64(&z.re) < 0.5 {
            let pi = BigComplex::pi();
            let iz = BigComplex::i() * &pi * &z;
            let sin = (iz.exp_c() - (-iz).exp_c()) / (BigComplex::i() * &BigComplex::from_i64(2));
            if sin.is_zero_value() || sin.log10_abs() < -((d + a) as f64 - 5.0) {
                return Err(PainleveError::GammaPole(format!("{z}")));
            }
            let g = spouge(&-z.clone(), a);
            Ok(pi / (sin * &g))
        } else {
            Ok(spouge(&(z - BigComplex::one()), a))
        }
    })?;
    Ok(out + BigComplex::zero())
}

/// `scale · Π Γ(q)^{e_q}` with every `q` in `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaProduct {
    pub scale: Q,
    pub powers: BTreeMap<Q, i64>,
}

impl GammaProduct {
    pub fn one() -> Self {
        GammaProduct { scale: rat(1, 1), powers: BTreeMap::new() }
    }

    /// `Γ(x)`, reduced to `(0, 1]` by the functional equation.
    pub fn gamma(x: &Q) -> Result<Self, PainleveError> {
        if x.is_integer() && !x.is_positive() {
            return Err(PainleveError::GammaPole(rational_to_string(x)));
        }
        let k = x.ceil() - rat(1, 1);
        let q = x.clone() - &k;
        let steps: i64 = k.to_integer().try_into().map_err(|_| PainleveError::GammaPole(rational_to_string(x)))?;
        let mut scale = rat(1, 1);
        if steps >= 0 {
            for j in 0..steps {
                scale *= q.clone() + rat(j, 1);
            }
        } else {
            for i in 0..-steps {
                scale /= x.clone() + rat(i, 1);
            }
        }
        let mut powers = BTreeMap::new();
        if q != rat(1, 1) {
            powers.insert(q, 1);
        }
        Ok(GammaProduct { scale, powers })
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut powers = self.powers.clone();
        for (q, e) in &o.powers {
            let v = powers.get(q).copied().unwrap_or(0) + e;
            if v == 0 {
                powers.remove(q);
            } else {
                powers.insert(q.clone(), v);
            }
        }
        GammaProduct { scale: self.scale.clone() * &o.scale, powers }
    }

    pub fn recip(&self) -> Self {
        GammaProduct { scale: self.scale.recip(), powers: self.powers.iter().map(|(q, e)| (q.clone(), -e)).collect() }
    }

    /// The value if no Γ factor survives.
    pub fn as_rational(&self) -> Option<&Q> {
        self.powers.is_empty().then_some(&self.scale)
    }

    pub fn value(&self) -> Result<BigComplex, PainleveError> {
        let mut v = BigComplex::from_rational(&self.scale);
        for (q, e) in &self.powers {
            v = v * &gamma(&BigComplex::from_rational(q))?.powi_c(*e);
        }
        Ok(v)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "scale": rational_to_string(&self.scale),
            "gamma_powers": self.powers.iter().map(|(q, e)| serde_json::json!([rational_to_string(q), e])).collect::<Vec<_>>(),
        })
    }
}

/// `G(1 + x + n) / G(1 + x)` as a product of Γ values.
pub fn barnes_shift(x: &Q, n: i64) -> Result<GammaProduct, PainleveError> {
    let mut out = GammaProduct::one();
    if n >= 0 {
        for k in 1..=n {
            out = out.mul(&GammaProduct::gamma(&(x.clone() + rat(k, 1)))?);
        }
    } else {
        for k in 0..-n {
            out = out.mul(&GammaProduct::gamma(&(x.clone() - rat(k, 1)))?.recip());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &BigComplex, b: &BigComplex, tol_digits: f64) -> bool {
        let d = a.clone() - b.clone();
        d.is_zero_value() || d.log10_abs() - b.log10_abs() < -tol_digits
    }

    #[test]
    fn integer_and_half_values() {
        let g5 = gamma(&BigComplex::from_i64(5)).unwrap();
        assert!(close(&g5, &BigComplex::from_i64(24), 45.0));
        let half = gamma(&BigComplex::from_rational(&rat(1, 2))).unwrap();
        assert!(close(&half, &BigComplex::pi().sqrt_c(), 45.0));
        let neg = gamma(&BigComplex::from_rational(&rat(-1, 2))).unwrap();
        assert!(close(&neg, &(BigComplex::pi().sqrt_c() * &BigComplex::from_i64(-2)), 45.0));
    }

    #[test]
    fn poles_reported() {
        assert!(matches!(GammaProduct::gamma(&rat(-2, 1)), Err(PainleveError::GammaPole(_))));
        assert!(matches!(gamma(&BigComplex::from_i64(0)), Err(PainleveError::GammaPole(_))));
    }

    #[test]
    fn reduction_is_exact() {
        let g = GammaProduct::gamma(&rat(7, 3)).unwrap();
        assert_eq!(g.scale, rat(4, 3) * rat(1, 3));
        assert_eq!(g.powers.get(&rat(1, 3)), Some(&1));
        let h = GammaProduct::gamma(&rat(-5, 3)).unwrap();
        assert_eq!(h.scale, (rat(-5, 3) * rat(-2, 3)).recip());
    }

    #[test]
    fn single_step() {
        let x = rat(1, 2);
        let r = barnes_shift(&x, 1).unwrap();
        let direct = gamma(&BigComplex::from_rational(&rat(3, 2))).unwrap();
        assert!(close(&r.value().unwrap(), &direct, 45.0));
    }
}
