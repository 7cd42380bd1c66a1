use rayon::prelude::*;
use serde_json::{json, Value};

use super::{mode_block, structure_constant_ratio, GammaProduct, PainleveError, TauKind, TauParams, TauSpec};
use crate::scalars::bigcomplex::{digits, with_digits};
use crate::scalars::{rat, rational_to_string, BigComplex, ExpSum, Field, PrefactoredSeries, Q};

/// Expansion variable of the block series: `t` itself, or `x = 1/t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    Direct,
    Inverse,
}

/// `e^{2πi·phase} · ratio`, with `phase` reduced to `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeWeight {
    pub phase: Q,
    pub ratio: GammaProduct,
}

impl ModeWeight {
    pub fn value(&self) -> Result<BigComplex, PainleveError> {
        let two_pi_i = BigComplex::i() * &BigComplex::pi() * &BigComplex::from_i64(2);
        Ok((two_pi_i * &BigComplex::from_rational(&self.phase)).exp_c() * &self.ratio.value()?)
    }
}

#[derive(Debug, Clone)]
pub struct TauMode {
    pub n: i64,
    pub weight: ModeWeight,
    pub block: PrefactoredSeries<Q>,
}

/// The Fourier sum `Σ_n weight_n · block_n`.
#[derive(Debug, Clone)]
pub struct TauSeries {
    pub spec: TauSpec,
    pub variable: Variable,
    pub modes: Vec<TauMode>,
}

/// `τ` and its first three derivatives in the physical variable.
#[derive(Debug, Clone)]
pub struct TauJet {
    pub at: BigComplex,
    pub d: [BigComplex; 4],
}

impl TauJet {
    pub fn add(&self, o: &TauJet) -> TauJet {
        TauJet { at: self.at.clone(), d: std::array::from_fn(|k| self.d[k].clone() + &o.d[k]) }
    }
}

fn frac(q: &Q) -> Q {
    q.clone() - q.floor()
}

fn mode_weight(spec: &TauSpec, n: i64) -> Result<ModeWeight, PainleveError> {
    let mut ratio = structure_constant_ratio(&spec.params, n)?;
    if let TauParams::VAtInfty { eta, .. } = &spec.params {
        let sign = if (n * (n + 1) / 2) % 2 == 0 { 1 } else { -1 };
        let extra = GammaProduct { scale: eta.powi(-2 * n * n) * rat(sign, 1), powers: Default::default() };
        ratio = ratio.mul(&extra);
    }
    Ok(ModeWeight { phase: frac(&(spec.rho.clone() * rat(n, 1))), ratio })
}

/// Per-mode blocks and weights; modes are built in parallel and stored in summation order.
pub fn tau_series(spec: &TauSpec) -> Result<TauSeries, PainleveError> {
    spec.validate()?;
    let modes = spec
        .modes()
        .par_iter()
        .map(|&n| Ok(TauMode { n, weight: mode_weight(spec, n)?, block: mode_block(&spec.params, n, spec.order)? }))
        .collect::<Result<Vec<_>, PainleveError>>()?;
    let variable = if spec.params.kind() == TauKind::VIAt0 { Variable::Direct } else { Variable::Inverse };
    Ok(TauSeries { spec: spec.clone(), variable, modes })
}

fn keep_range(s: &PrefactoredSeries<Q>, lo: usize, hi: usize) -> PrefactoredSeries<Q> {
    let coeffs = s.coeffs.iter().enumerate().map(|(k, c)| if k >= lo && k <= hi { c.clone() } else { rat(0, 1) }).collect();
    PrefactoredSeries { alpha: s.alpha.clone(), betas: s.betas.clone(), coeffs }
}

impl TauSeries {
    pub fn order(&self) -> usize {
        self.modes.iter().map(|m| m.block.order()).min().unwrap_or(0)
    }

    pub fn truncate(&self, order: usize) -> TauSeries {
        let modes = self.modes.iter().map(|m| TauMode { block: m.block.truncate(order), ..m.clone() }).collect();
        TauSeries { spec: TauSpec { order, ..self.spec.clone() }, variable: self.variable, modes }
    }

    /// The series restricted to the single block order `k`.
    pub fn term(&self, k: usize) -> TauSeries {
        let modes = self.modes.iter().map(|m| TauMode { block: keep_range(&m.block, k, k), ..m.clone() }).collect();
        TauSeries { spec: self.spec.clone(), variable: self.variable, modes }
    }

    /// Index of the smallest term `|c_k x^k|` of each mode at the physical point `t0`.
    pub fn smallest_terms(&self, t0: &BigComplex) -> Vec<(i64, usize)> {
        let x = match self.variable {
            Variable::Direct => t0.clone(),
            Variable::Inverse => t0.inv().expect("nonzero point"),
        };
        let lx = x.log10_abs();
        self.modes
            .iter()
            .map(|m| {
                let best = m
                    .block
                    .coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, log10_abs_q(c) + k as f64 * lx))
                    .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
                (m.n, best.0)
            })
            .collect()
    }

    /// The first mode whose last nonzero kept term lies past its smallest term at `t0`.
    pub fn past_optimal(&self, t0: &BigComplex) -> Option<(i64, usize)> {
        self.modes.iter().zip(self.smallest_terms(t0)).find_map(|(m, (n, smallest))| {
            let top = m.block.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
            (smallest < top).then_some((n, smallest))
        })
    }

    /// `τ, τ', τ'', τ'''` at `t0`; asymptotic series are refused past their smallest term unless `force`.
    pub fn jet(&self, t0: &BigComplex, force: bool) -> Result<TauJet, PainleveError> {
        if self.variable == Variable::Inverse && !force {
            if let Some((mode, smallest)) = self.past_optimal(t0) {
                return Err(PainleveError::PastOptimalTruncation { requested: self.order(), smallest, mode });
            }
        }
        let x0 = match self.variable {
            Variable::Direct => t0.clone(),
            Variable::Inverse => t0.inv().ok_or(PainleveError::TauZero)?,
        };
        let minus_one = rat(-1, 1);
        let prec = digits();
        let parts = self
            .modes
            .par_iter()
            .map(|m| with_digits(prec, || {
                let w = m.weight.value()?;
                let mut e = ExpSum::from_series(&m.block);
                let mut out: [BigComplex; 4] = std::array::from_fn(|_| BigComplex::zero());
                for slot in out.iter_mut() {
                    *slot = e.evaluate(&x0)? * &w;
                    e = match self.variable {
                        Variable::Direct => e.derivative(),
                        Variable::Inverse => e.derivative().mul_monomial(&minus_one, 2),
                    };
                }
                Ok(out)
            }))
            .collect::<Result<Vec<_>, PainleveError>>()?;
        let mut d: [BigComplex; 4] = std::array::from_fn(|_| BigComplex::zero());
        for p in parts {
            for k in 0..4 {
                d[k] = d[k].clone() + &p[k];
            }
        }
        Ok(TauJet { at: t0.clone(), d })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.spec.params.kind().name(),
            "variable": match self.variable { Variable::Direct => "t", Variable::Inverse => "1/t" },
            "modes": self.modes.iter().map(|m| json!({
                "n": m.n,
                "exponent": rational_to_string(&m.block.alpha),
                "charges": m.block.betas.iter().map(rational_to_string).collect::<Vec<_>>(),
                "coefficients": m.block.coeffs.iter().map(rational_to_string).collect::<Vec<_>>(),
                "phase": rational_to_string(&m.weight.phase),
                "ratio": m.weight.ratio.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn log10_abs_q(q: &Q) -> f64 {
    BigComplex::from_rational(q).log10_abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vi_spec(n_max: usize, order: usize) -> TauSpec {
        TauSpec {
            params: TauParams::VIAt0 { theta0: rat(13, 100), thetat: rat(27, 100), theta1: rat(31, 100), thetainf: rat(19, 100), sigma: rat(23, 100) },
            rho: rat(3, 10),
            n_max,
            order,
        }
    }

    #[test]
    fn leading_exponents_shift_with_mode() {
        let t = tau_series(&vi_spec(1, 1)).unwrap();
        for m in &t.modes {
            let s = rat(23, 100) + rat(m.n, 1);
            assert_eq!(m.block.alpha, s.square() - rat(13, 100).square() - rat(27, 100).square());
        }
        assert_eq!(t.modes.iter().map(|m| m.n).collect::<Vec<_>>(), vec![0, -1, 1]);
    }

    #[test]
    fn integer_shift_of_phase_is_invisible() {
        let a = tau_series(&vi_spec(1, 2)).unwrap();
        let mut spec = vi_spec(1, 2);
        spec.rho += rat(1, 1);
        let b = tau_series(&spec).unwrap();
        let t0 = BigComplex::from_rational(&rat(1, 20));
        let (ja, jb) = (a.jet(&t0, false).unwrap(), b.jet(&t0, false).unwrap());
        assert_eq!(format!("{:?}", ja.d), format!("{:?}", jb.d));
    }

    #[test]
    fn v_weights_carry_sign_and_eta() {
        let spec = TauSpec {
            params: TauParams::VAtInfty { theta: rat(1, 3), thetat: rat(2, 7), theta0: rat(-1, 5), eta: rat(3, 2), beta: rat(1, 4) },
            rho: rat(0, 1),
            n_max: 2,
            order: 1,
        };
        for n in [-2i64, -1, 1, 2] {
            let bare = structure_constant_ratio(&spec.params, n).unwrap();
            let w = mode_weight(&spec, n).unwrap();
            let sign = if (n * (n + 1) / 2) % 2 == 0 { 1 } else { -1 };
            assert_eq!(w.ratio.scale, bare.scale * rat(3, 2).powi(-2 * n * n) * rat(sign, 1));
        }
    }
}
