use super::{vo_on_vector, VOData, VoError};
use crate::heisenberg::FockVector;
use crate::scalars::{binomial, Field};
use crate::virasoro::ModuleVector;

/// Vectors that can be combined linearly.
pub trait Linear<F>: Clone {
    fn zero_like(&self) -> Self;
    fn add_scaled_by(&mut self, o: &Self, c: &F);
}

impl<F: Field> Linear<F> for ModuleVector<F> {
    fn zero_like(&self) -> Self {
        ModuleVector::zero(self.module())
    }
    fn add_scaled_by(&mut self, o: &Self, c: &F) {
        self.add_scaled(o, c)
    }
}

impl<F: Field> Linear<F> for FockVector<F> {
    fn zero_like(&self) -> Self {
        FockVector::zero(self.charges.clone())
    }
    fn add_scaled_by(&mut self, o: &Self, c: &F) {
        self.add_scaled(o, c)
    }
}

/// `z^{α_z} w^{α_w} e^{Σ β^{(z)}_j z^{-j} + β^{(w)}_j w^{-j}} (1 - w/z)^A Σ_k R_k(z) w^k`.
#[derive(Debug, Clone)]
pub struct RearrangedExpansion<F, C> {
    pub alpha_z: F,
    pub alpha_w: F,
    pub betas_z: Vec<F>,
    pub betas_w: Vec<F>,
    pub a: F,
    /// `R_k(z) = Σ_ℓ z^{ℓ-k} terms[k][ℓ]`, or the single vector `R_k(z_0)` when `fixed_z` is set.
    pub terms: Vec<Vec<C>>,
    pub fixed_z: Option<F>,
}

/// `(1 - w/z)^{s}` coefficients of `w^p z^{-p}`: `(-1)^p binom(s, p)`.
fn mixing<F: Field>(s: &F, p: usize) -> F {
    let b = binomial(s, p);
    if p.is_multiple_of(2) { b } else { -b }
}

/// Divide the direct expansion `Σ_m X_m w^m` by `(1 - w/z)^A`.
pub(crate) fn rearrange<F: Field, C: Linear<F>>(x: &[Vec<C>], a: &F, fixed_z: Option<&F>) -> Vec<Vec<C>> {
    let minus_a = -a.clone();
    let zinv = fixed_z.map(|z| z.inv().expect("nonzero z"));
    (0..x.len())
        .map(|k| {
            (0..x[k].len())
                .map(|l| {
                    let mut acc = x[k][l].zero_like();
                    for p in 0..=k {
                        let mut f = mixing(&minus_a, p);
                        if let Some(zi) = &zinv {
                            f = f * &zi.powi(p as i64);
                        }
                        if l < x[k - p].len() {
                            acc.add_scaled_by(&x[k - p][l], &f);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

impl<F: Field, C: Linear<F>> RearrangedExpansion<F, C> {
    /// Multiply back by `(1 - w/z)^A`, recovering the direct expansion.
    pub fn reexpand(&self) -> Vec<Vec<C>> {
        let zinv = self.fixed_z.as_ref().map(|z| z.inv().expect("nonzero z"));
        let x = &self.terms;
        (0..x.len())
            .map(|m| {
                (0..x[m].len())
                    .map(|l| {
                        let mut acc = x[m][l].zero_like();
                        for p in 0..=m {
                            let mut f = mixing(&self.a, p);
                            if let Some(zi) = &zinv {
                                f = f * &zi.powi(p as i64);
                            }
                            if l < x[m - p].len() {
                                acc.add_scaled_by(&x[m - p][l], &f);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }
}

/// Direct double expansion `X[m][ℓ]`, the coefficient of `w^m z^{ℓ-m}` in `Φ_outer(z)Φ_inner(w)|cyc⟩`.
pub fn direct_composition<F: Field>(outer: &VOData<F>, inner: &VOData<F>, k_max: usize, l_max: usize) -> Result<Vec<Vec<ModuleVector<F>>>, VoError> {
    if inner.order() < k_max {
        return Err(VoError::InsufficientOrder { needed: k_max, available: inner.order() });
    }
    (0..=k_max)
        .map(|m| {
            let s = vo_on_vector(outer, &inner.coeffs[m], l_max)?;
            if !inner.coeffs[m].is_zero() && s.alpha != outer.alpha.clone() - F::from_i64(m as i64) {
                return Err(VoError::Unsupported("inner coefficient is not homogeneous".into()));
            }
            Ok(s.coeffs)
        })
        .collect()
}

/// Rearranged expansion of two regular vertex operators.
pub fn compose_rearranged<F: Field>(outer: &VOData<F>, inner: &VOData<F>, a: &F, k_max: usize, l_max: usize) -> Result<RearrangedExpansion<F, ModuleVector<F>>, VoError> {
    let x = direct_composition(outer, inner, k_max, l_max)?;
    Ok(RearrangedExpansion {
        alpha_z: outer.alpha.clone(),
        alpha_w: inner.alpha.clone(),
        betas_z: outer.betas.clone(),
        betas_w: inner.betas.clone(),
        a: a.clone(),
        terms: rearrange(&x, a, None),
        fixed_z: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, Q};
    use crate::vertexops::regular_vo_coeffs;

    fn setup() -> (VOData<Q>, VOData<Q>) {
        let c = rat(7, 5);
        let (d1, d2, d3, d4, d5) = (rat(1, 3), rat(2, 7), rat(5, 11), rat(3, 8), rat(4, 13));
        let inner = regular_vo_coeffs(&d1, &d2, &d3, &c, 3).unwrap();
        let outer = regular_vo_coeffs(&d3, &d4, &d5, &c, 3).unwrap();
        (outer, inner)
    }

    #[test]
    fn round_trip() {
        let (outer, inner) = setup();
        let a = rat(-9, 4);
        let r = compose_rearranged(&outer, &inner, &a, 3, 3).unwrap();
        assert_eq!(r.reexpand(), direct_composition(&outer, &inner, 3, 3).unwrap());
    }

    #[test]
    fn leading_order_is_outer_on_cyclic() {
        let (outer, inner) = setup();
        let r = compose_rearranged(&outer, &inner, &rat(5, 2), 2, 3).unwrap();
        assert_eq!(r.terms[0], outer.coeffs[..=3].to_vec());
    }

    #[test]
    fn trivial_outer_reproduces_inner() {
        let c = rat(7, 5);
        let (d1, d2, d3) = (rat(1, 3), rat(2, 7), rat(5, 11));
        let inner = regular_vo_coeffs(&d1, &d2, &d3, &c, 3).unwrap();
        let outer = regular_vo_coeffs(&d3, &rat(0, 1), &d3, &c, 3).unwrap();
        let r = compose_rearranged(&outer, &inner, &rat(0, 1), 3, 3).unwrap();
        for k in 0..=3 {
            let total = r.terms[k].iter().fold(ModuleVector::zero(&outer.target), |acc, x| acc.add(x));
            assert_eq!(total.terms(), inner.coeffs[k].terms());
        }
    }
}
