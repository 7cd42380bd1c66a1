use std::collections::BTreeMap;
use std::sync::Arc;

use super::{irregular_words, VOData, VoError};
use crate::scalars::{linalg, Field};
use crate::virasoro::{Module, ModuleKind, ModuleVector, Word};

/// Affine expression `c + Σ x_s · s` in pending unknowns.
#[derive(Debug, Clone, PartialEq)]
struct Aff<F> {
    c: F,
    lin: BTreeMap<usize, F>,
}

impl<F: Field> Aff<F> {
    fn constant(c: F) -> Self {
        Aff { c, lin: BTreeMap::new() }
    }

    fn symbol(s: usize) -> Self {
        Aff { c: F::zero(), lin: BTreeMap::from([(s, F::one())]) }
    }

    fn is_const(&self) -> bool {
        self.lin.is_empty()
    }

    fn is_zero(&self) -> bool {
        self.c.is_zero() && self.lin.is_empty()
    }

    fn add_scaled(&mut self, o: &Aff<F>, f: &F) {
        if f.is_zero() {
            return;
        }
        self.c = self.c.clone() + o.c.clone() * f;
        for (s, x) in &o.lin {
            let v = self.lin.get(s).cloned().unwrap_or_else(F::zero) + x.clone() * f;
            if v.is_zero() {
                self.lin.remove(s);
            } else {
                self.lin.insert(*s, v);
            }
        }
    }

    fn scale(&self, f: &F) -> Self {
        let mut out = Aff::constant(F::zero());
        out.add_scaled(self, f);
        out
    }

    fn mul(&self, o: &Aff<F>) -> Option<Self> {
        if self.is_const() {
            Some(o.scale(&self.c))
        } else if o.is_const() {
            Some(self.scale(&o.c))
        } else {
            None
        }
    }

    fn substitute(&mut self, s: usize, e: &Aff<F>) {
        if let Some(x) = self.lin.remove(&s) {
            self.add_scaled(e, &x);
        }
    }
}

type AffVec<F> = BTreeMap<Word, Aff<F>>;

fn affvec_add_scaled<F: Field>(acc: &mut AffVec<F>, v: &AffVec<F>, f: &Aff<F>, order: usize) -> Result<(), VoError> {
    for (w, a) in v {
        let p = a.mul(f).ok_or(VoError::Bilinear { order })?;
        acc.entry(w.clone()).or_insert_with(|| Aff::constant(F::zero())).add_scaled(&p, &F::one());
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct IrregularOptions<F> {
    /// Extra orders solved beyond `N` to pin down free constants.
    pub lookahead: usize,
    /// Values of `α, β_1..β_{r-1}` that must agree with the recursion, if known.
    pub expected: Option<(F, Vec<F>)>,
}

impl<F> Default for IrregularOptions<F> {
    fn default() -> Self {
        IrregularOptions { lookahead: 0, expected: None }
    }
}

/// Solve the rank-`r` irregular vertex operator `M_Λ → M_{Λ'}` with insertion weight `Δ`.
///
/// `weights[k] = Λ_{r+k}`; `α` and `β_1..β_{r-1}` come out of the recursion.
pub fn irregular_vo_coeffs<F: Field>(r: usize, weights: &[F], beta_r: &F, delta: &F, c: &F, n: usize) -> Result<VOData<F>, VoError> {
    irregular_vo_coeffs_with(r, weights, beta_r, delta, c, n, &IrregularOptions::default())
}

pub fn irregular_vo_coeffs_with<F: Field>(
    r: usize,
    weights: &[F],
    beta_r: &F,
    delta: &F,
    c: &F,
    n: usize,
    opts: &IrregularOptions<F>,
) -> Result<VOData<F>, VoError> {
    if r == 0 || weights.len() != r + 1 {
        return Err(VoError::Unsupported(format!("rank {r} with {} weights", weights.len())));
    }
    if weights[r].is_zero() {
        return Err(VoError::ZeroTopWeight);
    }
    let mut first_err = None;
    for depth_mult in [1usize, 2] {
        match solve(r, weights, beta_r, delta, c, n, opts, depth_mult) {
            Ok(vo) => {
                if let Some((alpha, betas)) = &opts.expected {
                    if *alpha != vo.alpha {
                        return Err(VoError::ClosedFormMismatch("alpha".into()));
                    }
                    if betas[..] != vo.betas[..r - 1] {
                        return Err(VoError::ClosedFormMismatch("beta".into()));
                    }
                }
                return Ok(vo);
            }
            Err(e @ (VoError::Inconsistent { .. } | VoError::UnresolvedOrder { .. })) => {
                first_err.get_or_insert(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(first_err.unwrap())
}

#[allow(clippy::too_many_arguments)]
fn solve<F: Field>(
    r: usize,
    weights: &[F],
    beta_r: &F,
    delta: &F,
    c: &F,
    n: usize,
    opts: &IrregularOptions<F>,
    depth_mult: usize,
) -> Result<VOData<F>, VoError> {
    let ri = r as i64;
    let mut tw = weights.to_vec();
    tw[0] = tw[0].clone() - F::from_i64(ri) * beta_r;
    let target = Module::irregular(r, tw.clone(), c.clone());
    let depth = |m: usize| if depth_mult == 1 { m } else { 2 * m + r };

    // symbol 0 = α, symbols 1..r-1 = β_1..β_{r-1}
    let mut next_sym = r;
    let mut alpha = Aff::symbol(0);
    let mut betas: Vec<Aff<F>> = (1..r).map(Aff::symbol).collect();
    betas.push(Aff::constant(beta_r.clone()));
    let mut vs: Vec<AffVec<F>> = vec![BTreeMap::from([(Vec::new(), Aff::constant(F::one()))])];

    let source_weight = |k: i64| -> F {
        if k >= ri && k <= 2 * ri { weights[(k - ri) as usize].clone() } else { F::zero() }
    };
    let max_m = n + opts.lookahead + 2 * r + 2;
    let mut m = 0usize;
    loop {
        let resolved = alpha.is_const() && betas.iter().all(Aff::is_const) && vs.iter().take(n + 1).all(|v| v.values().all(Aff::is_const));
        if resolved && m >= n + opts.lookahead {
            break;
        }
        m += 1;
        if m > max_m {
            return Err(VoError::UnresolvedOrder { order: first_pending(&vs, n) });
        }
        let words = irregular_words(r, depth(m));
        let mut vm: AffVec<F> = BTreeMap::new();
        for w in words {
            vm.insert(w, Aff::symbol(next_sym));
            next_sym += 1;
        }
        vs.push(vm);
        let n_hi = (2 * ri + depth(m) as i64).max(m as i64 + ri) + 1;
        let mut eqs: Vec<Aff<F>> = Vec::new();
        for k in ri..=n_hi {
            // (L_k - Λ_k) v_m - Σ_i iβ_i v_{m+i-k} - (α + (k+1)Δ + m - k) v_{m-k} with the i=r term at k=r moved left
            let mut res: AffVec<F> = BTreeMap::new();
            let lam = source_weight(k);
            for (w, a) in &vs[m] {
                for (w2, x) in target.apply_letter(k, w).iter() {
                    res.entry(w2.clone()).or_insert_with(|| Aff::constant(F::zero())).add_scaled(a, x);
                }
                if !lam.is_zero() {
                    res.entry(w.clone()).or_insert_with(|| Aff::constant(F::zero())).add_scaled(a, &-lam.clone());
                }
            }
            let mi = m as i64;
            for (idx, b) in betas.iter().enumerate() {
                let i = idx as i64 + 1;
                let j = mi + i - k;
                if j < 0 || j as usize > m {
                    continue;
                }
                let f = b.scale(&F::from_i64(i));
                affvec_add_scaled(&mut res, &vs[j as usize], &f, m)?;
            }
            if mi - k >= 0 {
                let mut f = alpha.clone();
                f.c = f.c + F::from_i64(k + 1) * delta + F::from_i64(mi - k);
                let f = f.scale(&-F::one());
                affvec_add_scaled(&mut res, &vs[(mi - k) as usize], &f, m)?;
            }
            eqs.extend(res.into_values().filter(|a| !a.is_zero()));
        }
        let subs = reduce(&eqs, m)?;
        for (s, e) in subs {
            alpha.substitute(s, &e);
            for b in betas.iter_mut() {
                b.substitute(s, &e);
            }
            for v in vs.iter_mut() {
                for a in v.values_mut() {
                    a.substitute(s, &e);
                }
            }
        }
    }
    let coeffs = vs
        .iter()
        .take(n + 1)
        .map(|v| ModuleVector::from_terms(&target, v.iter().map(|(w, a)| (w.clone(), a.c.clone()))))
        .collect();
    Ok(VOData {
        source: ModuleKind::Irregular { rank: r, weights: weights.to_vec() },
        target: Arc::clone(&target),
        delta: delta.clone(),
        alpha: alpha.c,
        betas: betas.into_iter().map(|b| b.c).collect(),
        coeffs,
    })
}

fn first_pending<F: Field>(vs: &[AffVec<F>], n: usize) -> usize {
    vs.iter().take(n + 1).position(|v| v.values().any(|a| !a.is_const())).unwrap_or(0)
}

/// Row-reduce affine equations `e = 0`, returning substitutions `pivot ↦ expression`.
fn reduce<F: Field>(eqs: &[Aff<F>], order: usize) -> Result<Vec<(usize, Aff<F>)>, VoError> {
    let mut syms: Vec<usize> = eqs.iter().flat_map(|e| e.lin.keys().copied()).collect();
    syms.sort_unstable();
    syms.dedup();
    // newest unknowns first so older pending ones stay free longest
    syms.reverse();
    let col: BTreeMap<usize, usize> = syms.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let ncols = syms.len();
    let rows: Vec<Vec<F>> = eqs
        .iter()
        .map(|e| {
            let mut row = vec![F::zero(); ncols + 1];
            for (s, x) in &e.lin {
                row[col[s]] = x.clone();
            }
            row[ncols] = -e.c.clone();
            row
        })
        .collect();
    let red = linalg::rref(rows, ncols);
    for row in red.rows.iter().skip(red.pivots.len()) {
        if !row[ncols].is_zero() {
            return Err(VoError::Inconsistent { order });
        }
    }
    let mut subs = Vec::new();
    for (i, &p) in red.pivots.iter().enumerate() {
        let row = &red.rows[i];
        let mut e = Aff::constant(row[ncols].clone());
        for (j, x) in row.iter().enumerate().take(ncols) {
            if j != p && !x.is_zero() {
                e.lin.insert(syms[j], -x.clone());
            }
        }
        subs.push((syms[p], e));
    }
    Ok(subs)
}

/// `α` and `β_1..β_{r-1}` of the free-field operator `:e^{λ_z φ}:` with screening, from `λ_0..λ_r`.
pub fn alpha_beta_closed_form<F: Field>(r: usize, lambdas: &[F], lz: &F, beta_r: &F, rho: &F) -> Result<(F, Vec<F>), VoError> {
    let lr = lambdas.get(r).cloned().unwrap_or_else(F::zero);
    let inv = lr.inv().ok_or(VoError::ZeroTopWeight)?;
    let ri = F::from_i64(r as i64);
    let t = ri.clone() * beta_r * &inv;
    let half = F::from_rational(&crate::scalars::rat(r as i64 + 1, 2));
    let alpha = half * &(t.clone() + lz) * &(t.clone() - lz + F::from_i64(2) * rho) - t * &lambdas[0];
    let betas = (1..r).map(|k| ri.clone() * &lambdas[k] * beta_r * &(F::from_i64(k as i64) * &lr).inv().unwrap()).collect();
    Ok((alpha, betas))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, Q};

    #[test]
    fn rank_one_alpha() {
        let (l1, l2, b1, d, c): (Q, Q, Q, Q, Q) = (rat(3, 5), rat(7, 4), rat(2, 9), rat(1, 6), rat(1, 3));
        let vo = irregular_vo_coeffs(1, &[l1.clone(), l2.clone()], &b1, &d, &c, 3).unwrap();
        let expect = -(b1.clone() * (l1 - &b1)) / (rat(2, 1) * l2) - rat(2, 1) * d;
        assert_eq!(vo.alpha, expect);
        assert_eq!(vo.coeffs[0], vo.target.cyclic_vector());
        assert!(vo.check_recursion(6).unwrap() > 0);
    }

    #[test]
    fn rank_two_alpha_beta() {
        let w: Vec<Q> = vec![rat(2, 3), rat(-5, 7), rat(3, 4)];
        let (b2, d, c) = (rat(1, 5), rat(2, 7), rat(-3, 2));
        let vo = irregular_vo_coeffs(2, &w, &b2, &d, &c, 2).unwrap();
        assert_eq!(vo.betas[0], b2.clone() * &w[1] / &w[2]);
        let expect = b2.clone() * (w[1].clone() * &w[1] - rat(4, 1) * &w[2] * (w[0].clone() - rat(3, 1) * &b2))
            / (rat(4, 1) * &w[2] * &w[2])
            - rat(3, 1) * d;
        assert_eq!(vo.alpha, expect);
        vo.check_recursion(7).unwrap();
    }
}
