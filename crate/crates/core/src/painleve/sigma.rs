use serde::{Deserialize, Serialize};

use super::{PainleveError, TauJet, TauSeries};
use crate::scalars::bigcomplex::digits;
use crate::scalars::{rat, serde_q, BigComplex, Field, Q};

/// The σ-form equations and their versions after the affine change of variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", deny_unknown_fields)]
pub enum SigmaForm {
    #[serde(rename = "E_VI")]
    EVI {
        #[serde(with = "serde_q")]
        theta0: Q,
        #[serde(with = "serde_q")]
        thetat: Q,
        #[serde(with = "serde_q")]
        theta1: Q,
        #[serde(with = "serde_q")]
        thetainf: Q,
    },
    #[serde(rename = "E_V")]
    EV {
        #[serde(with = "serde_q")]
        theta: Q,
        #[serde(with = "serde_q")]
        theta0: Q,
        #[serde(with = "serde_q")]
        thetat: Q,
    },
    #[serde(rename = "E_IV")]
    EIV {
        #[serde(with = "serde_q")]
        theta_star: Q,
        #[serde(with = "serde_q")]
        thetat: Q,
    },
    /// Acts on `f = d/ds log τ`.
    #[serde(rename = "Etilde_V")]
    EtildeV {
        #[serde(with = "serde_q")]
        theta: Q,
        #[serde(with = "serde_q")]
        theta0: Q,
        #[serde(with = "serde_q")]
        thetat: Q,
        #[serde(with = "serde_q")]
        eta: Q,
        #[serde(with = "serde_q")]
        z2: Q,
    },
    /// Acts on `f = d/ds log τ`.
    #[serde(rename = "Etilde_IV")]
    EtildeIV {
        #[serde(with = "serde_q")]
        theta_star: Q,
        #[serde(with = "serde_q")]
        thetat: Q,
    },
}

impl SigmaForm {
    pub fn is_tilde(&self) -> bool {
        matches!(self, SigmaForm::EtildeV { .. } | SigmaForm::EtildeIV { .. })
    }
}

/// Top-level summands of the form at `t` for the jet `(y, y', y'')`.
pub fn form_terms<F: Field>(form: &SigmaForm, t: &F, y: &[F; 3]) -> Vec<F> {
    let k = |q: &Q| F::from_rational(q);
    let [s0, s1, s2] = y.clone();
    match form {
        SigmaForm::EVI { theta0, thetat, theta1, thetainf } => {
            let (a0, at, a1, ai) = (k(theta0), k(thetat), k(theta1), k(thetainf));
            let tm1 = t.clone() - F::one();
            let first = tm1.square() * &t.square() * &s1 * &s2.square();
            let inner = -s1.square() + (t.clone() * &s1 - s0).scale_i64(2) * &s1 - (a0.square() - a1.square()) * &(at.square() - ai.square());
            let shifts = [(a0.clone() - &a1).square(), (a0 + &a1).square(), (at.clone() - &ai).square(), (at + &ai).square()];
            let prod = shifts.iter().fold(F::one(), |acc, c| acc * &(s1.clone() + c));
            vec![first, inner.square(), -prod]
        }
        SigmaForm::EV { theta, theta0, thetat } => {
            let (th, a0, at) = (k(theta), k(theta0), k(thetat));
            let two_s1 = s1.scale_i64(2);
            let a = (t.clone() * &s2).square();
            let b = (s0 - t.clone() * &s1 + s1.square().scale_i64(2)).square();
            let c = ((two_s1.clone() - &th).square() - a0.square().scale_i64(4)) * &((two_s1 + &th).square() - at.square().scale_i64(4)) * &k(&rat(1, 4));
            vec![a, -b, c]
        }
        SigmaForm::EIV { theta_star, thetat } => {
            let (ts, at) = (k(theta_star), k(thetat));
            let c = s1.clone() * &(s1.clone() - &ts - &at) * &(s1.clone() - at.scale_i64(2));
            vec![s2.square(), -(t.clone() * &s1 - s0).square(), c.scale_i64(4)]
        }
        SigmaForm::EtildeV { theta, theta0, thetat, eta, z2 } => {
            let (th, a0, at, e) = (k(theta), k(theta0), k(thetat), k(eta));
            let sz = t.clone() - &k(z2);
            let u = sz.clone() * &s1 + &s0;
            let first = e.square() * &s0 * &sz - u.clone() * &(u.scale_i64(2) + e.clone() * &(th.scale_i64(2) + e.clone() * &sz));
            let second = (e.clone() * &(th.clone() - &a0) + &u) * &(e.clone() * &(th + &a0) + &u) * &(e.clone() * &at + &u) * &(e.clone() * &at - &u);
            let third = e.square() * &sz.square() * &(sz * &s2 + s1.scale_i64(2)).square();
            vec![first.square(), second.scale_i64(4), -third]
        }
        SigmaForm::EtildeIV { theta_star, thetat } => {
            let (ts, at) = (k(theta_star), k(thetat));
            let c = (at.clone() - &s1) * &(s1.clone() + &ts) * &(s1.clone() + &at);
            vec![s2.square(), -(s0 - t.clone() * &s1).square(), c.scale_i64(4)]
        }
    }
}

pub fn form_value<F: Field>(form: &SigmaForm, t: &F, y: &[F; 3]) -> F {
    form_terms(form, t, y).into_iter().fold(F::zero(), |a, b| a + b)
}

/// `(y, y', y'')` from a τ jet: the log-derivative for the transformed forms, σ by its definition otherwise.
pub fn jet_from_tau(form: &SigmaForm, tau: &TauJet) -> Result<[BigComplex; 3], PainleveError> {
    let inv = tau.d[0].inv().ok_or(PainleveError::TauZero)?;
    let r: Vec<BigComplex> = tau.d.iter().map(|d| d.clone() * &inv).collect();
    let f = r[1].clone();
    let f1 = r[2].clone() - f.square();
    let f2 = r[3].clone() - r[2].clone() * &f * &BigComplex::from_i64(3) + f.powi(3) * &BigComplex::from_i64(2);
    let t = tau.at.clone();
    let q = |x: &Q| BigComplex::from_rational(x);
    Ok(match form {
        SigmaForm::EtildeV { .. } | SigmaForm::EtildeIV { .. } => [f, f1, f2],
        SigmaForm::EVI { theta0, thetat, theta1, thetainf } => {
            let e1 = (q(theta0).square() + q(thetat).square() - q(theta1).square() - q(thetainf).square()) * &q(&rat(1, 2));
            let e2 = (q(thetat).square() + q(theta1).square() - q(theta0).square() - q(thetainf).square()) * &q(&rat(1, 2));
            let one = BigComplex::one();
            let two = BigComplex::from_i64(2);
            let g = t.clone() * &(t.clone() - &one);
            let g1 = t.clone() * &two - &one;
            let s0 = (t.clone() - &one) * &e1 + t.clone() * &e2 + g.clone() * &f;
            let s1 = e1 + e2 + g1.clone() * &f + g.clone() * &f1;
            let s2 = two.clone() * &f + two * &g1 * &f1 + g * &f2;
            [s0, s1, s2]
        }
        SigmaForm::EV { theta, .. } => {
            let s0 = -(q(theta).square() * &q(&rat(1, 2))) + t.clone() * &f;
            let s1 = f.clone() + t.clone() * &f1;
            let s2 = f1.scale_i64(2) + t * &f2;
            [s0, s1, s2]
        }
        SigmaForm::EIV { theta_star, .. } => [q(theta_star) * &t + &f, q(theta_star) + f1, f2],
    })
}

/// Input of a residual evaluation.
pub enum Source<'a> {
    Tau { series: &'a TauSeries, force: bool },
    /// `t ↦ (σ, σ', σ'')`, or `(f, f', f'')` for the transformed forms.
    Jet(&'a dyn Fn(&BigComplex) -> [BigComplex; 3]),
}

#[derive(Debug, Clone)]
pub struct Residual {
    pub value: BigComplex,
    /// Largest summand modulus, the scale of the cancellation.
    pub scale: f64,
    /// Decimal digits cancelled between the summands.
    pub lost_digits: f64,
    pub jet: [BigComplex; 3],
}

impl Residual {
    pub fn abs(&self) -> f64 {
        self.value.abs_f64()
    }
}

pub fn sigma_ode_residual(form: &SigmaForm, source: Source<'_>, t0: &BigComplex) -> Result<Residual, PainleveError> {
    let jet = match source {
        Source::Tau { series, force } => jet_from_tau(form, &series.jet(t0, force)?)?,
        Source::Jet(f) => f(t0),
    };
    residual_of_jet(form, t0, jet)
}

fn residual_of_jet(form: &SigmaForm, t0: &BigComplex, jet: [BigComplex; 3]) -> Result<Residual, PainleveError> {
    let terms = form_terms(form, t0, &jet);
    let scale = terms.iter().map(|x| x.log10_abs()).fold(f64::NEG_INFINITY, f64::max);
    let value = terms.into_iter().fold(BigComplex::zero(), |a, b| a + b);
    if scale == f64::NEG_INFINITY {
        return Ok(Residual { value, scale: 0.0, lost_digits: 0.0, jet });
    }
    let lost = scale - value.log10_abs();
    let d = digits();
    if lost > d as f64 {
        return Err(PainleveError::InsufficientPrecision { lost, digits: d });
    }
    Ok(Residual { value, scale: 10f64.powf(scale), lost_digits: lost, jet })
}

/// First-order size of the change in the form caused by moving the jet by `delta`:
/// `Σ_j |∂E/∂y_j| |δy_j|`, with the partials taken by central differences.
pub fn propagated_change(form: &SigmaForm, t0: &BigComplex, jet: &[BigComplex; 3], delta: &[BigComplex; 3]) -> f64 {
    let d = digits();
    let mut total = 0.0;
    for j in 0..3 {
        let scale = 1.0f64.max(jet[j].abs_f64());
        let h = BigComplex::from_f64(scale, 0.0) * &BigComplex::from_rational(&rat(1, 10).powi((d / 2) as i64));
        let mut up = jet.clone();
        let mut dn = jet.clone();
        up[j] = up[j].clone() + &h;
        dn[j] = dn[j].clone() - &h;
        let partial = (form_value(form, t0, &up) - form_value(form, t0, &dn)) / (h * &BigComplex::from_i64(2));
        total += partial.abs_f64() * delta[j].abs_f64();
    }
    total
}

/// Residual of the order-`N` truncation together with two first-order yardsticks:
/// the change caused by the first dropped block term and by the last kept one.
#[derive(Debug, Clone)]
pub struct ResidualBudget {
    pub order: usize,
    pub residual: Residual,
    pub first_dropped: f64,
    pub last_kept: f64,
}

/// `series` must carry at least `order + 1` block terms.
pub fn residual_budget(series: &TauSeries, order: usize, t0: &BigComplex, force: bool) -> Result<ResidualBudget, PainleveError> {
    if series.order() <= order || order == 0 {
        return Err(PainleveError::InvalidSpec(format!("a budget at order {order} needs block terms through {}", order + 1)));
    }
    let form = series.spec.params.sigma_form();
    let kept = series.truncate(order).jet(t0, force)?;
    let y = jet_from_tau(&form, &kept)?;
    let residual = residual_of_jet(&form, t0, y.clone())?;
    let next = kept.add(&series.term(order + 1).jet(t0, true)?);
    let y_next = jet_from_tau(&form, &next)?;
    let y_prev = jet_from_tau(&form, &series.truncate(order - 1).jet(t0, true)?)?;
    let diff = |a: &[BigComplex; 3], b: &[BigComplex; 3]| -> [BigComplex; 3] { std::array::from_fn(|k| a[k].clone() - &b[k]) };
    Ok(ResidualBudget {
        order,
        first_dropped: propagated_change(&form, t0, &y, &diff(&y_next, &y)),
        last_kept: propagated_change(&form, t0, &y, &diff(&y, &y_prev)),
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_sigma_for_fourth() {
        let form = SigmaForm::EIV { theta_star: rat(1, 3), thetat: rat(2, 5) };
        let z = [rat(0, 1), rat(0, 1), rat(0, 1)];
        assert_eq!(form_value(&form, &rat(7, 3), &z), rat(0, 1));
    }

    #[test]
    fn zero_sigma_for_fifth() {
        let (th, a0, at) = (rat(1, 3), rat(2, 5), rat(-3, 7));
        let form = SigmaForm::EV { theta: th.clone(), theta0: a0.clone(), thetat: at.clone() };
        let z = [rat(0, 1), rat(0, 1), rat(0, 1)];
        let want = (th.square() - a0.square() * rat(4, 1)) * (th.square() - at.square() * rat(4, 1)) * rat(1, 4);
        assert_eq!(form_value(&form, &rat(5, 2), &z), want);
    }

    #[test]
    fn fourth_definition_is_log_derivative() {
        let form = SigmaForm::EIV { theta_star: rat(1, 3), thetat: rat(2, 5) };
        let t = BigComplex::from_rational(&rat(3, 2));
        let one = BigComplex::one();
        let jet = TauJet { at: t.clone(), d: [BigComplex::from_i64(2), one.clone(), one.clone(), one] };
        let y = jet_from_tau(&form, &jet).unwrap();
        let want = BigComplex::from_rational(&rat(1, 3)) * &t + BigComplex::from_rational(&rat(1, 2));
        assert!((y[0].clone() - want).abs_f64() < 1e-40);
    }

    #[test]
    fn tilde_forms_are_transformed_plain_forms() {
        let (th, a0, at, eta) = (rat(1, 3), rat(2, 5), rat(-3, 7), rat(3, 2));
        let tilde = SigmaForm::EtildeV { theta: th.clone(), theta0: a0.clone(), thetat: at.clone(), eta: eta.clone(), z2: rat(0, 1) };
        let plain = SigmaForm::EV { theta: th.clone(), theta0: a0, thetat: at };
        let (s, f, f1, f2) = (rat(5, 2), rat(1, 7), rat(-2, 9), rat(4, 11));
        let t = eta.clone() * &s;
        let sigma = -(th.square() * rat(1, 2)) - th.clone() * &t * rat(1, 2) - s.clone() * &f;
        let u = s.clone() * &f1 + &f;
        let s1 = -(th.clone() * rat(1, 2)) - u / eta.clone();
        let s2 = -(f1.scale_i64(2) + s.clone() * &f2) / eta.square();
        let lhs = form_value(&tilde, &s, &[f, f1, f2]);
        let rhs = -(eta.powi(4) * form_value(&plain, &t, &[sigma, s1, s2]));
        assert_eq!(lhs, rhs);
    }
}
