//! Free boson Fock spaces, the free-field Virasoro action and exponential vertex operators.
//!
//! A [`FockVector`] is `P(a_{-1}, a_{-2}, …) · exp(Σ_{k≥1} λ_k a_{-k}/k)|λ_0⟩` where
//! the exponential base is kept implicit through its charges.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::combinatorics::enumerate_partitions;
use crate::scalars::{binomial, linalg, AsScalar, Field, PrefactoredSeries};
use crate::virasoro::{partition_word, shapovalov, Module, ModuleKind, ModuleVector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("singular module at level {level}")]
    SingularModule { level: usize },
    #[error("zero top charge")]
    ZeroTopCharge,
    #[error("charges do not match the module weights")]
    ChargeMismatch,
    #[error("weight {0} has no square root in this field")]
    NoSquareRoot(String),
    #[error("dictionary only maps Verma modules back from Fock space")]
    NotVerma,
    #[error("vector needs level {needed} but only {available} is available")]
    InsufficientLevel { needed: usize, available: usize },
}

/// Monomial in creation operators: multiset of `k` in `a_{-k}`, sorted decreasing.
pub type Mono = Vec<u32>;

#[derive(Debug, Clone, PartialEq)]
pub struct FockConfig<F> {
    pub rho: F,
}

impl<F: Field> FockConfig<F> {
    pub fn new(rho: F) -> Self {
        FockConfig { rho }
    }

    pub fn central_charge(&self) -> F {
        F::one() - F::from_i64(12) * self.rho.square()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockVector<F> {
    /// `λ_0, λ_1, …` of the exponential base.
    pub charges: Vec<F>,
    pub terms: BTreeMap<Mono, F>,
}

fn insert_sorted(m: &Mono, k: u32) -> Mono {
    let mut out = m.clone();
    let pos = out.iter().position(|&x| x < k).unwrap_or(out.len());
    out.insert(pos, k);
    out
}

fn mono_level(m: &Mono) -> usize {
    m.iter().map(|&k| k as usize).sum()
}

fn add_term<F: Field>(acc: &mut BTreeMap<Mono, F>, m: Mono, c: F) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&m) {
        Some(x) => {
            let s = x.clone() + c;
            if s.is_zero() {
                acc.remove(&m);
            } else {
                *x = s;
            }
        }
        None => {
            acc.insert(m, c);
        }
    }
}

fn mul_polys<F: Field>(a: &BTreeMap<Mono, F>, b: &BTreeMap<Mono, F>, max_level: Option<usize>) -> BTreeMap<Mono, F> {
    let mut acc = BTreeMap::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            if let Some(l) = max_level {
                if mono_level(ma) + mono_level(mb) > l {
                    continue;
                }
            }
            let mut m: Mono = ma.iter().chain(mb.iter()).copied().collect();
            m.sort_unstable_by(|x, y| y.cmp(x));
            add_term(&mut acc, m, ca.clone() * cb);
        }
    }
    acc
}

/// `exp(Σ_k d_k a_{-k}/k)` truncated at total level `max_level`; `d[k-1] = d_k`.
fn exp_creation<F: Field>(d: &[F], max_level: usize) -> BTreeMap<Mono, F> {
    // h_t = level-t part; t h_t = Σ_k d_k a_{-k} h_{t-k}
    let mut h: Vec<BTreeMap<Mono, F>> = vec![BTreeMap::from([(Vec::new(), F::one())])];
    for t in 1..=max_level {
        let mut acc = BTreeMap::new();
        for k in 1..=t {
            let dk = d.get(k - 1).cloned().unwrap_or_else(F::zero);
            if dk.is_zero() {
                continue;
            }
            for (m, c) in &h[t - k] {
                add_term(&mut acc, insert_sorted(m, k as u32), c.clone() * &dk);
            }
        }
        let inv = F::from_i64(t as i64).inv().unwrap();
        h.push(acc.into_iter().map(|(m, c)| (m, c * &inv)).collect());
    }
    h.into_iter().flatten().collect()
}

impl<F: Field> FockVector<F> {
    pub fn base(charges: Vec<F>) -> Self {
        FockVector { charges, terms: BTreeMap::from([(Vec::new(), F::one())]) }
    }

    pub fn zero(charges: Vec<F>) -> Self {
        FockVector { charges, terms: BTreeMap::new() }
    }

    pub fn from_terms(charges: Vec<F>, terms: impl IntoIterator<Item = (Mono, F)>) -> Self {
        let mut acc = BTreeMap::new();
        for (m, c) in terms {
            let mut m = m;
            m.sort_unstable_by(|x, y| y.cmp(x));
            add_term(&mut acc, m, c);
        }
        FockVector { charges, terms: acc }
    }

    pub fn lambda0(&self) -> &F {
        &self.charges[0]
    }

    /// Charge `λ_k` of the base, zero beyond the stored range.
    pub fn charge(&self, k: usize) -> F {
        self.charges.get(k).cloned().unwrap_or_else(F::zero)
    }

    /// Highest `k` with a nonzero charge `λ_k`, `k ≥ 1`; 0 if none.
    pub fn rank(&self) -> usize {
        (1..self.charges.len()).rev().find(|&k| !self.charges[k].is_zero()).unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_level(&self) -> usize {
        self.terms.keys().map(mono_level).max().unwrap_or(0)
    }

    pub fn coefficient(&self, m: &[u32]) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn scale(&self, c: &F) -> Self {
        FockVector {
            charges: self.charges.clone(),
            terms: if c.is_zero() {
                BTreeMap::new()
            } else {
                self.terms.iter().map(|(m, x)| (m.clone(), x.clone() * c)).collect()
            },
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut acc = self.terms.clone();
        for (m, c) in &o.terms {
            add_term(&mut acc, m.clone(), c.clone());
        }
        FockVector { charges: self.charges.clone(), terms: acc }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-F::one()))
    }

    pub fn add_scaled(&mut self, o: &Self, c: &F) {
        for (m, x) in &o.terms {
            add_term(&mut self.terms, m.clone(), x.clone() * c);
        }
    }

    pub fn truncate_level(&self, max_level: usize) -> Self {
        FockVector {
            charges: self.charges.clone(),
            terms: self.terms.iter().filter(|(m, _)| mono_level(m) <= max_level).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn level_part(&self, level: usize) -> Self {
        FockVector {
            charges: self.charges.clone(),
            terms: self.terms.iter().filter(|(m, _)| mono_level(m) == level).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Re-express over the base with `charges`, keeping total level `≤ max_level`.
    pub fn rebase(&self, charges: Vec<F>, max_level: usize) -> Self {
        let n = charges.len().max(self.charges.len());
        let d: Vec<F> = (1..n.max(max_level + 1)).map(|k| self.charge(k) - charges.get(k).cloned().unwrap_or_else(F::zero)).collect();
        let e = exp_creation(&d, max_level);
        FockVector { charges, terms: mul_polys(&self.terms, &e, Some(max_level)) }
    }

    pub fn map_coeffs(&self, f: impl Fn(&F) -> F) -> Self {
        FockVector::from_terms(self.charges.clone(), self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

impl<F: Field + AsScalar> FockVector<F> {
    pub fn to_json(&self) -> Value {
        json!({
            "charges": self.charges.iter().map(AsScalar::as_scalar).collect::<Vec<_>>(),
            "terms": self.terms.iter().map(|(m, c)| json!({
                "word": m.iter().map(|&k| -(k as i64)).collect::<Vec<_>>(),
                "coef": c.as_scalar(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Heisenberg mode `a_n` acting on `v`.
pub fn act_a<F: Field>(n: i64, v: &FockVector<F>) -> FockVector<F> {
    let mut acc = BTreeMap::new();
    if n < 0 {
        for (m, c) in &v.terms {
            add_term(&mut acc, insert_sorted(m, (-n) as u32), c.clone());
        }
    } else if n == 0 {
        return v.scale(v.lambda0());
    } else {
        let k = n as u32;
        let lam = v.charge(n as usize);
        for (m, c) in &v.terms {
            let mult = m.iter().filter(|&&x| x == k).count();
            if mult > 0 {
                let pos = m.iter().position(|&x| x == k).unwrap();
                let mut m2 = m.clone();
                m2.remove(pos);
                add_term(&mut acc, m2, c.clone() * &F::from_i64(n * mult as i64));
            }
            if !lam.is_zero() {
                add_term(&mut acc, m.clone(), c.clone() * &lam);
            }
        }
    }
    FockVector { charges: v.charges.clone(), terms: acc }
}

/// Free-field Virasoro generator `L_n = ½ Σ :a_{n-k} a_k: - ρ(n+1) a_n`.
pub fn act_l_fock<F: Field>(n: i64, v: &FockVector<F>, cfg: &FockConfig<F>) -> FockVector<F> {
    let top = v.max_level().max(v.rank()) as i64;
    let mut out = FockVector::zero(v.charges.clone());
    // pairs i < j with i + j = n, a_j applied first; a_j kills v for j > top
    let mut j = n.div_euclid(2) + 1;
    while j <= top.max(n - j) && j <= top.max(0) + n.abs() + 1 {
        let i = n - j;
        if j > top && j > 0 {
            break;
        }
        let aj = act_a(j, v);
        if !aj.is_zero() {
            out = out.add(&act_a(i, &aj));
        }
        j += 1;
    }
    if n % 2 == 0 {
        let h = n / 2;
        let x = act_a(h, &act_a(h, v));
        out.add_scaled(&x, &F::from_rational(&crate::scalars::rat(1, 2)));
    }
    if !cfg.rho.is_zero() {
        let x = act_a(n, v);
        out.add_scaled(&x, &-(cfg.rho.clone() * &F::from_i64(n + 1)));
    }
    out
}

pub fn delta_of_lambda<F: Field>(lambda: &F, rho: &F) -> F {
    lambda.clone() * &(lambda.clone() - F::from_i64(2) * rho) * &F::from_rational(&crate::scalars::rat(1, 2))
}

/// Irregular weights `Λ_r..Λ_{2r}` of the base with charges `λ_0..λ_r`.
pub fn lambda_of_lambdas<F: Field>(lambdas: &[F], rho: &F, r: usize) -> Result<Vec<F>, FockError> {
    if r > 0 && lambdas.get(r).is_none_or(|x| x.is_zero()) {
        return Err(FockError::ZeroTopCharge);
    }
    let lam = |k: i64| -> F {
        if k < 0 || k as usize > r {
            F::zero()
        } else {
            lambdas.get(k as usize).cloned().unwrap_or_else(F::zero)
        }
    };
    let half = F::from_rational(&crate::scalars::rat(1, 2));
    Ok((r..=2 * r)
        .map(|n| {
            let n = n as i64;
            let mut s = F::zero();
            for k in 0..=n {
                s = s + lam(n - k) * &lam(k);
            }
            let mut v = s * &half;
            if n == r as i64 {
                v = v - F::from_i64(r as i64 + 1) * rho * &lam(r as i64);
            }
            v
        })
        .collect())
}

/// The charge `λ = ρ ± sqrt(ρ² + 2Δ)` with `Δ(λ) = Δ`.
pub fn lambda_for_weight<F: Field>(delta: &F, rho: &F, other_root: bool) -> Result<F, FockError> {
    let disc = rho.square() + F::from_i64(2) * delta;
    let s = disc.sqrt().ok_or_else(|| FockError::NoSquareRoot(format!("{disc:?}")))?;
    Ok(if other_root { rho.clone() - s } else { rho.clone() + s })
}

/// Image of a Verma or irregular module vector in the Fock space with the given charges.
pub fn to_fock<F: Field>(v: &ModuleVector<F>, charges: &[F], cfg: &FockConfig<F>) -> Result<FockVector<F>, FockError> {
    let module = v.module();
    if *module.central_charge() != cfg.central_charge() {
        return Err(FockError::ChargeMismatch);
    }
    match module.kind() {
        ModuleKind::Verma { delta } => {
            if delta_of_lambda(&charges[0], &cfg.rho) != *delta {
                return Err(FockError::ChargeMismatch);
            }
        }
        ModuleKind::Irregular { rank, weights } => {
            if lambda_of_lambdas(charges, &cfg.rho, *rank)? != *weights {
                return Err(FockError::ChargeMismatch);
            }
        }
        _ => return Err(FockError::NotVerma),
    }
    let base = FockVector::base(charges.to_vec());
    let mut out = FockVector::zero(charges.to_vec());
    for (w, c) in v.terms() {
        let mut x = base.clone();
        for &n in w.iter().rev() {
            x = act_l_fock(n, &x, cfg);
        }
        out.add_scaled(&x, c);
    }
    Ok(out)
}

/// Inverse dictionary for a Fock vector over `|λ_0⟩` (rank 0), level by level.
pub fn to_verma<F: Field>(v: &FockVector<F>, cfg: &FockConfig<F>) -> Result<ModuleVector<F>, FockError> {
    if v.rank() != 0 {
        return Err(FockError::NotVerma);
    }
    let delta = delta_of_lambda(v.lambda0(), &cfg.rho);
    let c = cfg.central_charge();
    let module = Module::verma(delta.clone(), c.clone());
    let base = FockVector::base(vec![v.lambda0().clone()]);
    let mut out = ModuleVector::zero(&module);
    for level in 0..=v.max_level() {
        let part = v.level_part(level);
        if part.is_zero() {
            continue;
        }
        if linalg::determinant(&shapovalov(&delta, &c, level)).is_zero() {
            return Err(FockError::SingularModule { level });
        }
        let parts = enumerate_partitions(level);
        let images: Vec<FockVector<F>> = parts
            .iter()
            .map(|p| {
                let mut x = base.clone();
                for &n in partition_word(p).iter().rev() {
                    x = act_l_fock(n, &x, cfg);
                }
                x
            })
            .collect();
        // rows: Fock monomials (partitions), columns: Verma words
        let a: Vec<Vec<F>> = parts.iter().map(|m| images.iter().map(|img| img.coefficient(m.parts())).collect()).collect();
        let b: Vec<F> = parts.iter().map(|m| part.coefficient(m.parts())).collect();
        let x = linalg::solve(&a, &b).map_err(|_| FockError::SingularModule { level })?;
        for (p, xi) in parts.iter().zip(x) {
            out.add_scaled(&ModuleVector::basis(&module, partition_word(p)), &xi);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub enum DictVector<F: Field> {
    Verma(ModuleVector<F>, Vec<F>),
    Fock(FockVector<F>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ToFock,
    ToVerma,
}

/// Dispatch to [`to_fock`] or [`to_verma`].
pub fn fock_dictionary<F: Field>(dir: Direction, v: &DictVector<F>, cfg: &FockConfig<F>) -> Result<DictVector<F>, FockError> {
    match (dir, v) {
        (Direction::ToFock, DictVector::Verma(mv, charges)) => Ok(DictVector::Fock(to_fock(mv, charges, cfg)?)),
        (Direction::ToVerma, DictVector::Fock(fv)) => {
            let mv = to_verma(fv, cfg)?;
            Ok(DictVector::Verma(mv, fv.charges.clone()))
        }
        (Direction::ToFock, DictVector::Fock(f)) => Ok(DictVector::Fock(f.clone())),
        (Direction::ToVerma, DictVector::Verma(..)) => Ok(v.clone()),
    }
}

/// `P(a_{-k} - λ_z z^{-k})` as a map from the power of `z^{-1}` to a Fock polynomial.
fn shift_polynomial<F: Field>(v: &FockVector<F>, lz: &F) -> BTreeMap<usize, BTreeMap<Mono, F>> {
    let mut out: BTreeMap<usize, BTreeMap<Mono, F>> = BTreeMap::new();
    for (m, c) in &v.terms {
        // group multiplicities
        let mut groups: Vec<(u32, usize)> = Vec::new();
        for &k in m {
            match groups.last_mut() {
                Some((kk, cnt)) if *kk == k => *cnt += 1,
                _ => groups.push((k, 1)),
            }
        }
        let mut partial: Vec<(usize, Mono, F)> = vec![(0, Vec::new(), c.clone())];
        for (k, mult) in groups {
            let mut next = Vec::new();
            for (zp, mono, coef) in &partial {
                for j in 0..=mult {
                    let f = binomial(&F::from_i64(mult as i64), j) * &(-lz.clone()).powi(j as i64);
                    let mut mono2 = mono.clone();
                    mono2.extend(std::iter::repeat_n(k, mult - j));
                    next.push((zp + j * k as usize, mono2, coef.clone() * &f));
                }
            }
            partial = next;
        }
        for (zp, mono, coef) in partial {
            add_term(out.entry(zp).or_default(), mono, coef);
        }
    }
    out
}

/// `:e^{λ_z φ(z)}:` applied to `v`, as a prefactored series in `z`.
///
/// The exponent is `λ_z λ_0 - L` where `L` is the top level of `v`; coefficient `m`
/// multiplies `z^{λ_zλ_0 - L + m}` and lives over the base `(λ_0 + λ_z, λ_1, …, λ_r)`.
pub fn apply_exp_vo<F: Field>(lz: &F, v: &FockVector<F>, order: usize) -> PrefactoredSeries<F, FockVector<F>> {
    let top = v.max_level();
    let r = v.rank();
    let shifted = shift_polynomial(v, lz);
    let mut charges = v.charges.clone();
    charges[0] = charges[0].clone() + lz;
    let creation: Vec<F> = vec![lz.clone(); order + 1];
    let ex = exp_creation(&creation, order + top);
    let mut by_level: Vec<BTreeMap<Mono, F>> = vec![BTreeMap::new(); order + top + 1];
    for (m, c) in ex {
        by_level[mono_level(&m)].insert(m, c);
    }
    let coeffs = (0..=order)
        .map(|m| {
            // z^{m - top}: Σ_{t - s = m - top} h_t · shifted_s
            let mut acc = BTreeMap::new();
            for (&s, poly) in &shifted {
                let t = m as i64 - top as i64 + s as i64;
                if t < 0 || t as usize >= by_level.len() {
                    continue;
                }
                for (mm, cc) in mul_polys(poly, &by_level[t as usize], None) {
                    add_term(&mut acc, mm, cc);
                }
            }
            FockVector { charges: charges.clone(), terms: acc }
        })
        .collect();
    let betas = (1..=r).map(|k| -(v.charge(k) * lz) * &F::from_i64(k as i64).inv().unwrap()).collect();
    PrefactoredSeries { alpha: lz.clone() * v.lambda0() - F::from_i64(top as i64), betas, coeffs }
}

/// `:e^{λ_z φ(z)}:` applied to `v` at a fixed value of `z`, truncated at Fock level `max_level`.
///
/// Returns the scalar prefactor data `(λ_zλ_0, [-λ_kλ_z/k])` and the vector
/// `P(a_{-k} - λ_z z^{-k})` over charges `(λ_0 + λ_z, λ_k + λ_z z^k)`.
pub fn apply_exp_vo_at<F: Field>(lz: &F, v: &FockVector<F>, z: &F, max_level: usize) -> (F, Vec<F>, FockVector<F>) {
    let r = v.rank();
    let shifted = shift_polynomial(v, lz);
    let zinv = z.inv().expect("z must be nonzero");
    let mut acc = BTreeMap::new();
    for (&s, poly) in &shifted {
        let f = zinv.powi(s as i64);
        for (m, c) in poly {
            if mono_level(m) <= max_level {
                add_term(&mut acc, m.clone(), c.clone() * &f);
            }
        }
    }
    let mut charges = vec![v.lambda0().clone() + lz];
    let mut zp = F::one();
    for k in 1..=max_level.max(r) {
        zp = zp * z;
        charges.push(v.charge(k) + lz.clone() * &zp);
    }
    let betas = (1..=r).map(|k| -(v.charge(k) * lz) * &F::from_i64(k as i64).inv().unwrap()).collect();
    (lz.clone() * v.lambda0(), betas, FockVector { charges, terms: acc })
}

/// Fock basis monomials of a given level (partitions, decreasing parts).
pub fn fock_basis(level: usize) -> Vec<Mono> {
    enumerate_partitions(level).into_iter().map(|p| p.parts().to_vec()).collect()
}

pub fn module_for_charges<F: Field>(charges: &[F], cfg: &FockConfig<F>) -> Result<Arc<Module<F>>, FockError> {
    let r = (1..charges.len()).rev().find(|&k| !charges[k].is_zero()).unwrap_or(0);
    let c = cfg.central_charge();
    if r == 0 {
        Ok(Module::verma(delta_of_lambda(&charges[0], &cfg.rho), c))
    } else {
        Ok(Module::irregular(r, lambda_of_lambdas(&charges[..=r], &cfg.rho, r)?, c))
    }
}
