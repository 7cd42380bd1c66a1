//! Regular and irregular vertex operators, their compositions and confluence limits.

mod compose;
mod degenerate;
mod irregular;

use std::sync::Arc;

use thiserror::Error;

use crate::combinatorics::enumerate_partitions;
use crate::heisenberg::FockError;
use crate::scalars::{linalg, Field, PrefactoredSeries, SeriesError};
use crate::virasoro::{partition_word, shapovalov, Module, ModuleKind, ModuleVector, Word};

pub use compose::{compose_rearranged, RearrangedExpansion};
pub(crate) use degenerate::whittaker_levels;
pub use degenerate::{degeneration_report, rank0_to_1_spec, rank_up_spec, DegenerationReport, DegenerationSpec, OrderCheck, Scheme};
pub use irregular::{alpha_beta_closed_form, irregular_vo_coeffs, irregular_vo_coeffs_with, IrregularOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VoError {
    #[error("singular module at level {level}")]
    SingularModule { level: usize },
    #[error("top irregular weight is zero")]
    ZeroTopWeight,
    #[error("order {order} could not be resolved by the recursion")]
    UnresolvedOrder { order: usize },
    #[error("recursion is inconsistent at order {order}")]
    Inconsistent { order: usize },
    #[error("nonlinear coupling between pending unknowns at order {order}")]
    Bilinear { order: usize },
    #[error("need order {needed}, only {available} solved")]
    InsufficientOrder { needed: usize, available: usize },
    #[error("negative ε-valuation {valuation} at order {order}, level {level}, word {word:?}")]
    NegativeValuation { order: usize, level: usize, word: Vec<i64>, valuation: i64 },
    #[error("mismatch at order {order}: {difference}")]
    MismatchAtOrder { order: usize, difference: String },
    #[error("recursion residual nonzero for n = {n} at order {m}")]
    ResidualNonzero { n: i64, m: usize },
    #[error("closed form disagrees with the recursion for {0}")]
    ClosedFormMismatch(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Solved vertex operator `Φ(z)|cyc⟩ = z^α exp(Σ β_i z^{-i}) Σ_m v_m z^m`.
#[derive(Debug, Clone)]
pub struct VOData<F: Field> {
    pub source: ModuleKind<F>,
    pub target: Arc<Module<F>>,
    pub delta: F,
    pub alpha: F,
    pub betas: Vec<F>,
    pub coeffs: Vec<ModuleVector<F>>,
}

impl<F: Field> VOData<F> {
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn rank(&self) -> usize {
        self.source.rank()
    }

    pub fn series(&self) -> PrefactoredSeries<F, ModuleVector<F>> {
        PrefactoredSeries { alpha: self.alpha.clone(), betas: self.betas.clone(), coeffs: self.coeffs.clone() }
    }

    /// Source weight `Λ_n` (or `Δ` at `n = 0` for Verma sources), zero when `L_n` is not diagonal.
    fn source_weight(&self, n: i64) -> F {
        match &self.source {
            ModuleKind::Verma { delta } => if n == 0 { delta.clone() } else { F::zero() },
            ModuleKind::Irregular { rank, weights } => {
                let r = *rank as i64;
                if n >= r && n <= 2 * r { weights[(n - r) as usize].clone() } else { F::zero() }
            }
            _ => F::zero(),
        }
    }

    /// Residual of the defining relation `L_n Φ|cyc⟩ = (Λ_n + z^n(z∂ + (n+1)Δ))Φ|cyc⟩` at `z^{α+m}`.
    pub fn relation_residual(&self, n: i64, m: usize) -> ModuleVector<F> {
        let lhs = self.coeffs[m].act(n);
        let mut rhs = self.coeffs[m].scale(&self.source_weight(n));
        let mi = m as i64;
        if mi - n >= 0 && ((mi - n) as usize) < self.coeffs.len() {
            let f = self.alpha.clone() + F::from_i64(n + 1) * &self.delta + F::from_i64(mi - n);
            rhs.add_scaled(&self.coeffs[(mi - n) as usize], &f);
        }
        for (k, b) in self.betas.iter().enumerate() {
            let i = k as i64 + 1;
            let j = mi - n + i;
            if j >= 0 && (j as usize) < self.coeffs.len() {
                rhs.add_scaled(&self.coeffs[j as usize], &-(F::from_i64(i) * b));
            }
        }
        lhs.sub(&rhs)
    }

    /// Re-check the defining relations for `n` from the first constrained mode up to `n_max`.
    pub fn check_recursion(&self, n_max: i64) -> Result<usize, VoError> {
        let n_lo = match &self.source {
            ModuleKind::Irregular { rank, .. } => *rank as i64,
            _ => 1,
        };
        let mut count = 0;
        for m in 0..self.coeffs.len() {
            for n in n_lo..=n_max {
                if !self.relation_residual(n, m).is_zero() {
                    return Err(VoError::ResidualNonzero { n, m });
                }
                count += 1;
            }
        }
        Ok(count)
    }
}

/// Coefficients of the regular vertex operator `M_{Δ_1} → M_{Δ_3}` with insertion weight `Δ_2`.
pub fn regular_vo_coeffs<F: Field>(d1: &F, d2: &F, d3: &F, c: &F, n: usize) -> Result<VOData<F>, VoError> {
    let target = Module::verma(d3.clone(), c.clone());
    let mut coeffs = vec![target.cyclic_vector()];
    for k in 1..=n {
        let parts = enumerate_partitions(k);
        let g = shapovalov(d3, c, k);
        let b: Vec<F> = parts
            .iter()
            .map(|mu| {
                let mut ki = k as i64;
                let mut prod = F::one();
                for &p in mu.parts() {
                    let p = p as i64;
                    prod = prod * &(d3.clone() + F::from_i64(p) * d2 - d1 + F::from_i64(ki - p));
                    ki -= p;
                }
                prod
            })
            .collect();
        let x = linalg::solve(&g, &b).map_err(|_| VoError::SingularModule { level: k })?;
        coeffs.push(ModuleVector::from_terms(&target, parts.iter().map(partition_word).zip(x)));
    }
    Ok(VOData {
        source: ModuleKind::Verma { delta: d1.clone() },
        target,
        delta: d2.clone(),
        alpha: d3.clone() - d2 - d1,
        betas: Vec::new(),
        coeffs,
    })
}

/// `Φ(z) L_n u` from `Φ(z) u = z^{a} e^{Σβ_i z^{-i}} Σ w_ℓ z^ℓ`; returns the shift of `a` and the new coefficients.
fn commute_letter<F: Field>(vo: &VOData<F>, n: i64, a: &F, w: &[ModuleVector<F>]) -> (i64, Vec<ModuleVector<F>>) {
    let r = vo.betas.len() as i64;
    let off = if r > 0 { (n - r).min(0) } else { n.min(0) };
    let max_shift = if r > 0 { off.max(off - n + r) } else { off.max(off - n) };
    let len = w.len() as i64 - max_shift;
    let module = &vo.target;
    let mut out = Vec::new();
    for j in 0..len.max(0) {
        let mut acc = ModuleVector::zero(module);
        // L_n w_ℓ sits at z^{a+ℓ}: ℓ = j + off
        let l1 = j + off;
        if l1 >= 0 {
            acc = acc.add(&w[l1 as usize].act(n));
        }
        let l2 = j + off - n;
        if l2 >= 0 {
            let f = a.clone() + F::from_i64(l2) + F::from_i64(n + 1) * &vo.delta;
            acc.add_scaled(&w[l2 as usize], &-f);
        }
        for (k, b) in vo.betas.iter().enumerate() {
            let i = k as i64 + 1;
            let l3 = j + off - n + i;
            if l3 >= 0 {
                acc.add_scaled(&w[l3 as usize], &(F::from_i64(i) * b));
            }
        }
        out.push(acc);
    }
    (off, out)
}

/// `Φ(z) L_{w_1}⋯L_{w_k}|cyc⟩` as a prefactored series truncated at `order`.
pub fn vo_on_descendant<F: Field>(vo: &VOData<F>, word: &[i64], order: usize) -> Result<PrefactoredSeries<F, ModuleVector<F>>, VoError> {
    let (shift, coeffs) = descendant_coeffs(vo, word)?;
    if coeffs.len() < order + 1 {
        return Err(VoError::InsufficientOrder { needed: order, available: coeffs.len().saturating_sub(1) });
    }
    Ok(PrefactoredSeries {
        alpha: vo.alpha.clone() + F::from_i64(shift),
        betas: vo.betas.clone(),
        coeffs: coeffs[..=order].to_vec(),
    })
}

fn descendant_coeffs<F: Field>(vo: &VOData<F>, word: &[i64]) -> Result<(i64, Vec<ModuleVector<F>>), VoError> {
    let mut shift = 0i64;
    let mut w = vo.coeffs.clone();
    for &n in word.iter().rev() {
        let a = vo.alpha.clone() + F::from_i64(shift);
        let (off, next) = commute_letter(vo, n, &a, &w);
        shift += off;
        w = next;
    }
    Ok((shift, w))
}

/// `Φ(z) u` for a source vector whose words all share the same exponent shift.
pub fn vo_on_vector<F: Field>(vo: &VOData<F>, u: &ModuleVector<F>, order: usize) -> Result<PrefactoredSeries<F, ModuleVector<F>>, VoError> {
    let mut shift: Option<i64> = None;
    let mut acc: Vec<ModuleVector<F>> = Vec::new();
    for (word, c) in u.terms() {
        let (s, coeffs) = descendant_coeffs(vo, word)?;
        if coeffs.len() < order + 1 {
            return Err(VoError::InsufficientOrder { needed: order, available: coeffs.len().saturating_sub(1) });
        }
        match shift {
            None => {
                shift = Some(s);
                acc = coeffs[..=order].iter().map(|x| x.scale(c)).collect();
            }
            Some(s0) if s0 == s => {
                for (a, x) in acc.iter_mut().zip(&coeffs) {
                    a.add_scaled(x, c);
                }
            }
            Some(_) => return Err(VoError::Unsupported("source vector mixes grades".into())),
        }
    }
    let shift = shift.unwrap_or(0);
    if acc.is_empty() {
        acc = vec![ModuleVector::zero(&vo.target); order + 1];
    }
    Ok(PrefactoredSeries { alpha: vo.alpha.clone() + F::from_i64(shift), betas: vo.betas.clone(), coeffs: acc })
}

/// Canonical words of an irregular module of rank `r` with weight at most `depth`.
pub fn irregular_words(r: usize, depth: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for d in 0..=depth {
        for p in enumerate_partitions(d) {
            out.push(p.parts().iter().map(|&x| r as i64 - x as i64).collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, Q};
    use crate::virasoro::reduce_word;

    #[test]
    fn level_one_regular() {
        let (d1, d2, d3, c) = (rat(1, 3), rat(2, 7), rat(5, 11), rat(3, 2));
        let vo = regular_vo_coeffs(&d1, &d2, &d3, &c, 3).unwrap();
        assert_eq!(vo.coeffs[0], vo.target.cyclic_vector());
        let expect = (d3.clone() + &d2 - &d1) / (rat(2, 1) * &d3);
        assert_eq!(vo.coeffs[1], ModuleVector::basis(&vo.target, vec![-1]).scale(&expect));
        assert_eq!(vo.check_recursion(4).unwrap(), 16);
    }

    #[test]
    fn vanishing_level_one() {
        let vo = regular_vo_coeffs(&rat(3, 5), &rat(0, 1), &rat(3, 5), &rat(1, 1), 1).unwrap();
        assert!(vo.coeffs[1].is_zero());
    }

    #[test]
    fn descendant_leading_term() {
        let (d1, d2, d3, c) = (rat(1, 3), rat(2, 7), rat(5, 11), rat(3, 2));
        let vo = regular_vo_coeffs(&d1, &d2, &d3, &c, 3).unwrap();
        let s = vo_on_descendant(&vo, &[-1], 2).unwrap();
        assert_eq!(s.alpha, vo.alpha.clone() - rat(1, 1));
        let lead = -(d3.clone() - &d2 - &d1);
        assert_eq!(s.coeffs[0], vo.coeffs[0].scale(&lead));
    }

    #[test]
    fn descendant_matches_generic_vertex_relation() {
        // Φ L_{-2}|Δ_1⟩ paired against ⟨Δ_3| L_1 at order 1 equals a direct recomputation
        let (d1, d2, d3, c): (Q, Q, Q, Q) = (rat(2, 9), rat(1, 4), rat(3, 7), rat(5, 3));
        let vo = regular_vo_coeffs(&d1, &d2, &d3, &c, 4).unwrap();
        let s = vo_on_descendant(&vo, &[-2], 3).unwrap();
        let a = vo.alpha.clone();
        let expect0 = vo.coeffs[0].scale(&-(a.clone() - rat(1, 1) * &d2));
        assert_eq!(s.coeffs[0], expect0);
        let expect2 = reduce_word(&[-2], &vo.target).add(&vo.coeffs[2].scale(&-(a + rat(2, 1) - &d2)));
        assert_eq!(s.coeffs[2], expect2);
    }
}
