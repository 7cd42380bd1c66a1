//! The `c = 1` four-point block as a sum over pairs of Young diagrams, and its Verma-module oracle.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::{enumerate_partitions, Partition};
use crate::scalars::{binomial, Field, PrefactoredSeries};
use crate::vertexops::{regular_vo_coeffs, vo_on_vector, VoError};
use crate::virasoro::{pair, Module, ModuleVector, VirasoroError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AgtError {
    #[error("zero denominator at cell ({i}, {j}) of the {which} diagram")]
    ZeroDenominator { which: &'static str, i: usize, j: usize },
    #[error("mismatch at order {order}: {difference}")]
    MismatchAtOrder { order: usize, difference: String },
    #[error("leading exponents differ: {0}")]
    ExponentMismatch(String),
    #[error(transparent)]
    Vo(#[from] VoError),
    #[error(transparent)]
    Virasoro(#[from] VirasoroError),
}

/// External weights `θ_0, θ_t, θ_1, θ_∞` and internal `σ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockParams<F> {
    pub theta0: F,
    pub thetat: F,
    pub theta1: F,
    pub thetainf: F,
    pub sigma: F,
}

impl<F: Field> BlockParams<F> {
    pub fn with_sigma(&self, sigma: F) -> Self {
        BlockParams { sigma, ..self.clone() }
    }
}

fn half_weight<F: Field>(lambda: &Partition, mu: &Partition, p: &BlockParams<F>, sign: i64, which: &'static str) -> Result<F, AgtError> {
    let s = p.sigma.clone() * &F::from_i64(sign);
    let two_s = s.clone() + &s;
    let mut acc = F::one();
    for (i, j) in lambda.cells() {
        let shift = F::from_i64(i as i64 - j as i64);
        let a = p.thetat.clone() + &s + &shift;
        let b = p.theta1.clone() + &s + &shift;
        let num = (a.square() - p.theta0.square()) * &(b.square() - p.thetainf.square());
        let h = F::from_i64(lambda.cell_stats(i, j).unwrap().hook);
        let d = F::from_i64(lambda.conj_part(j) + mu.part(i) - i as i64 - j as i64 + 1) + &two_s;
        let den = h.square() * &d.square();
        let inv = den.inv().ok_or(AgtError::ZeroDenominator { which, i, j })?;
        acc = acc * &num * &inv;
    }
    Ok(acc)
}

/// Weight `N_{λ,μ}` of a pair of Young diagrams.
pub fn nekrasov_pair_weight<F: Field>(lambda: &Partition, mu: &Partition, p: &BlockParams<F>) -> Result<F, AgtError> {
    Ok(half_weight(lambda, mu, p, 1, "first")? * &half_weight(mu, lambda, p, -1, "second")?)
}

/// `Σ_{|λ|+|μ| = k} N_{λ,μ}` for `k = 0..=n`.
pub fn instanton_sums<F: Field>(p: &BlockParams<F>, n: usize) -> Result<Vec<F>, AgtError> {
    (0..=n)
        .into_par_iter()
        .map(|k| {
            let mut pairs = Vec::new();
            for a in 0..=k {
                for l in enumerate_partitions(a) {
                    for m in enumerate_partitions(k - a) {
                        pairs.push((l.clone(), m));
                    }
                }
            }
            let mut total = F::zero();
            for (l, m) in &pairs {
                total = total + nekrasov_pair_weight(l, m, p)?;
            }
            Ok(total)
        })
        .collect()
}

/// Combinatorial block `t^{σ²-θ_0²-θ_t²}(1-t)^{2θ_tθ_1} Σ N_{λ,μ} t^{|λ|+|μ|}` to order `n`.
pub fn block_series_agt<F: Field>(p: &BlockParams<F>, n: usize) -> Result<PrefactoredSeries<F>, AgtError> {
    let sums = instanton_sums(p, n)?;
    let a = F::from_i64(2) * &p.thetat * &p.theta1;
    let prefactor: Vec<F> = (0..=n).map(|j| if j % 2 == 0 { binomial(&a, j) } else { -binomial(&a, j) }).collect();
    let coeffs = (0..=n)
        .map(|k| (0..=k).fold(F::zero(), |acc, j| acc + prefactor[j].clone() * &sums[k - j]))
        .collect();
    Ok(PrefactoredSeries {
        alpha: p.sigma.square() - p.theta0.square() - p.thetat.square(),
        betas: Vec::new(),
        coeffs,
    })
}

/// `⟨Δ_∞| Φ^{Δ_1}(1) Φ^{Δ_t}(t) |Δ_0⟩` with internal weight `sigma_sq`, by the level-by-level solves.
pub fn verma_block<F: Field>(p: &BlockParams<F>, sigma_sq: &F, n: usize) -> Result<PrefactoredSeries<F>, AgtError> {
    let c = F::one();
    let (d0, dt, d1, dinf) = (p.theta0.square(), p.thetat.square(), p.theta1.square(), p.thetainf.square());
    let inner = regular_vo_coeffs(&d0, &dt, sigma_sq, &c, n)?;
    let outer = regular_vo_coeffs(sigma_sq, &d1, &dinf, &c, 0)?;
    let dual = Module::new(crate::virasoro::ModuleKind::DualVerma { delta: dinf.clone() }, c.clone());
    let bra = ModuleVector::basis(&dual, Vec::new());
    let coeffs = (0..=n)
        .into_par_iter()
        .map(|m| {
            let s = vo_on_vector(&outer, &inner.coeffs[m], 0)?;
            Ok(pair(&bra, &s.coeffs[0])?)
        })
        .collect::<Result<Vec<F>, AgtError>>()?;
    Ok(PrefactoredSeries { alpha: inner.alpha.clone(), betas: Vec::new(), coeffs })
}

/// Compare two block series coefficient by coefficient, then their exponents.
pub fn crosscheck_series<F: Field>(a: &PrefactoredSeries<F>, b: &PrefactoredSeries<F>) -> Result<usize, AgtError> {
    let n = a.coeffs.len().min(b.coeffs.len());
    for k in 0..n {
        if a.coeffs[k] != b.coeffs[k] {
            return Err(AgtError::MismatchAtOrder {
                order: k,
                difference: format!("{:?}", a.coeffs[k].clone() - b.coeffs[k].clone()),
            });
        }
    }
    if a.alpha != b.alpha {
        return Err(AgtError::ExponentMismatch(format!("{:?} vs {:?}", a.alpha, b.alpha)));
    }
    Ok(n)
}

/// Exact agreement of the combinatorial block with the Verma computation up to order `n`.
pub fn crosscheck_block<F: Field>(p: &BlockParams<F>, n: usize) -> Result<usize, AgtError> {
    let agt = block_series_agt(p, n)?;
    let verma = verma_block(p, &p.sigma.square(), n)?;
    crosscheck_series(&agt, &verma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, Q};

    fn params() -> BlockParams<Q> {
        BlockParams { theta0: rat(1, 3), thetat: rat(2, 7), theta1: rat(-3, 5), thetainf: rat(1, 4), sigma: rat(2, 9) }
    }

    #[test]
    fn single_cell() {
        let p = params();
        let one = Partition::new(vec![1]).unwrap();
        let e = Partition::empty();
        assert_eq!(nekrasov_pair_weight(&e, &e, &p).unwrap(), rat(1, 1));
        let s = p.sigma.clone();
        let f = |s: &Q| {
            ((p.thetat.clone() + s).square() - p.theta0.square()) * ((p.theta1.clone() + s).square() - p.thetainf.square())
                / (rat(4, 1) * s.square())
        };
        assert_eq!(nekrasov_pair_weight(&one, &e, &p).unwrap(), f(&s));
        assert_eq!(nekrasov_pair_weight(&e, &one, &p).unwrap(), f(&-s));
    }

    #[test]
    fn matches_verma_to_order_three() {
        assert_eq!(crosscheck_block(&params(), 3).unwrap(), 4);
    }

    #[test]
    fn zero_denominator_reported() {
        let p = params().with_sigma(rat(0, 1));
        let one = Partition::new(vec![1]).unwrap();
        assert!(matches!(nekrasov_pair_weight(&one, &Partition::empty(), &p), Err(AgtError::ZeroDenominator { .. })));
    }
}
