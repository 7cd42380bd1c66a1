//! Virasoro modules in a canonical PBW word basis.
//!
//! A word `[n_1, …, n_k]` stands for `L_{n_1} ⋯ L_{n_k}` applied to the cyclic
//! vector; canonical words have weakly increasing indices. Dual modules are
//! stored through the anti-involution `L_n ↦ L_{-n}`, so a dual vector
//! `⟨cyc| L_{m_k} ⋯ L_{m_1}` is held as the ket word `[-m_1, …, -m_k]`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde_json::{json, Value};
use thiserror::Error;

use crate::combinatorics::enumerate_partitions;
use crate::scalars::{AsScalar, Field};

pub type Word = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VirasoroError {
    #[error("incompatible pairing: {0}")]
    IncompatibleKinds(String),
    #[error("singular module at level {level}")]
    SingularModule { level: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModuleKind<F> {
    Verma { delta: F },
    DualVerma { delta: F },
    /// `weights[k] = Λ_{r+k}` for `k = 0..=r`.
    Irregular { rank: usize, weights: Vec<F> },
    /// `weights[k] = Λ_{-(r+k)}` for `k = 0..=r`.
    DualIrregular { rank: usize, weights: Vec<F> },
    VacuumIrreducible,
}

impl<F: Field> ModuleKind<F> {
    pub fn is_dual(&self) -> bool {
        matches!(self, ModuleKind::DualVerma { .. } | ModuleKind::DualIrregular { .. })
    }

    /// Rank of the underlying ket module (0 for Verma and vacuum).
    pub fn rank(&self) -> usize {
        match self {
            ModuleKind::Irregular { rank, .. } | ModuleKind::DualIrregular { rank, .. } => *rank,
            _ => 0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModuleKind::Verma { .. } => "Verma",
            ModuleKind::DualVerma { .. } => "DualVerma",
            ModuleKind::Irregular { .. } => "Irregular",
            ModuleKind::DualIrregular { .. } => "DualIrregular",
            ModuleKind::VacuumIrreducible => "VacuumIrreducible",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Cyclic<F> {
    Free,
    Scalar(F),
}

type Expansion<F> = Arc<Vec<(Word, F)>>;

/// A module together with its central charge and a cache of letter actions.
#[derive(Debug)]
pub struct Module<F: Field> {
    kind: ModuleKind<F>,
    c: F,
    cache: Mutex<HashMap<(i64, Word), Expansion<F>>>,
}

impl<F: Field> Module<F> {
    pub fn new(kind: ModuleKind<F>, c: F) -> Arc<Self> {
        Arc::new(Module { kind, c, cache: Mutex::new(HashMap::new()) })
    }

    pub fn verma(delta: F, c: F) -> Arc<Self> {
        Self::new(ModuleKind::Verma { delta }, c)
    }

    pub fn irregular(rank: usize, weights: Vec<F>, c: F) -> Arc<Self> {
        assert_eq!(weights.len(), rank + 1, "irregular module needs Λ_r..Λ_2r");
        Self::new(ModuleKind::Irregular { rank, weights }, c)
    }

    pub fn kind(&self) -> &ModuleKind<F> {
        &self.kind
    }

    pub fn central_charge(&self) -> &F {
        &self.c
    }

    /// Largest free letter index.
    pub fn max_free(&self) -> i64 {
        match &self.kind {
            ModuleKind::Verma { .. } | ModuleKind::DualVerma { .. } => -1,
            ModuleKind::Irregular { rank, .. } | ModuleKind::DualIrregular { rank, .. } => *rank as i64 - 1,
            ModuleKind::VacuumIrreducible => -2,
        }
    }

    fn is_free(&self, n: i64) -> bool {
        n <= self.max_free()
    }

    fn cyclic(&self, n: i64) -> Cyclic<F> {
        if self.is_free(n) {
            return Cyclic::Free;
        }
        match &self.kind {
            ModuleKind::Verma { delta } | ModuleKind::DualVerma { delta } => {
                Cyclic::Scalar(if n == 0 { delta.clone() } else { F::zero() })
            }
            ModuleKind::Irregular { rank, weights } | ModuleKind::DualIrregular { rank, weights } => {
                let r = *rank as i64;
                Cyclic::Scalar(if n <= 2 * r { weights[(n - r) as usize].clone() } else { F::zero() })
            }
            ModuleKind::VacuumIrreducible => Cyclic::Scalar(F::zero()),
        }
    }

    /// Grading of a word: `Σ (r - n_i)`; the Verma level when `r = 0`.
    pub fn weight(&self, w: &[i64]) -> i64 {
        let r = self.kind.rank() as i64;
        w.iter().map(|n| r - n).sum()
    }

    /// Canonical expansion of `L_n · word|cyc⟩`, `word` canonical.
    pub fn apply_letter(&self, n: i64, word: &[i64]) -> Expansion<F> {
        let key = (n, word.to_vec());
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let out = Arc::new(self.compute_letter(n, word));
        self.cache.lock().unwrap().insert(key, out.clone());
        out
    }

    fn compute_letter(&self, n: i64, word: &[i64]) -> Vec<(Word, F)> {
        let Some((&k, rest)) = word.split_first() else {
            return match self.cyclic(n) {
                Cyclic::Free => vec![(vec![n], F::one())],
                Cyclic::Scalar(s) if s.is_zero() => Vec::new(),
                Cyclic::Scalar(s) => vec![(Vec::new(), s)],
            };
        };
        if self.is_free(n) && n <= k {
            let mut w = Vec::with_capacity(word.len() + 1);
            w.push(n);
            w.extend_from_slice(word);
            return vec![(w, F::one())];
        }
        // L_n L_k rest = L_k (L_n rest) + [L_n, L_k] rest
        let mut acc: BTreeMap<Word, F> = BTreeMap::new();
        for (w, c) in self.apply_letter(n, rest).iter() {
            for (w2, c2) in self.apply_letter(k, w).iter() {
                add_into(&mut acc, w2, c.clone() * c2);
            }
        }
        if n != k {
            let f = F::from_i64(n - k);
            for (w, c) in self.apply_letter(n + k, rest).iter() {
                add_into(&mut acc, w, f.clone() * c);
            }
        }
        if n + k == 0 && !self.c.is_zero() {
            let central = self.c.clone() * &F::from_rational(&crate::scalars::rat(n * n * n - n, 12));
            add_into(&mut acc, rest, central);
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    pub fn cyclic_vector(self: &Arc<Self>) -> ModuleVector<F> {
        ModuleVector::basis(self, Vec::new())
    }
}

fn add_into<F: Field>(acc: &mut BTreeMap<Word, F>, w: &[i64], c: F) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(w) {
        Some(x) => {
            let s = x.clone() + c;
            if s.is_zero() {
                acc.remove(w);
            } else {
                *x = s;
            }
        }
        None => {
            acc.insert(w.to_vec(), c);
        }
    }
}

/// A finite combination of canonical words over a module's cyclic vector.
#[derive(Debug, Clone)]
pub struct ModuleVector<F: Field> {
    module: Arc<Module<F>>,
    terms: BTreeMap<Word, F>,
}

impl<F: Field> PartialEq for ModuleVector<F> {
    fn eq(&self, o: &Self) -> bool {
        self.module.kind == o.module.kind && self.terms == o.terms
    }
}

impl<F: Field> ModuleVector<F> {
    pub fn zero(module: &Arc<Module<F>>) -> Self {
        ModuleVector { module: module.clone(), terms: BTreeMap::new() }
    }

    pub fn basis(module: &Arc<Module<F>>, word: Word) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(word, F::one());
        ModuleVector { module: module.clone(), terms }
    }

    pub fn from_terms(module: &Arc<Module<F>>, terms: impl IntoIterator<Item = (Word, F)>) -> Self {
        let mut acc = BTreeMap::new();
        for (w, c) in terms {
            add_into(&mut acc, &w, c);
        }
        ModuleVector { module: module.clone(), terms: acc }
    }

    pub fn module(&self) -> &Arc<Module<F>> {
        &self.module
    }

    pub fn terms(&self) -> &BTreeMap<Word, F> {
        &self.terms
    }

    pub fn coefficient(&self, w: &[i64]) -> F {
        self.terms.get(w).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.module);
        }
        ModuleVector {
            module: self.module.clone(),
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x.clone() * c)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut acc = self.terms.clone();
        for (w, c) in &o.terms {
            add_into(&mut acc, w, c.clone());
        }
        ModuleVector { module: self.module.clone(), terms: acc }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-F::one()))
    }

    pub fn add_scaled(&mut self, o: &Self, c: &F) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &o.terms {
            add_into(&mut self.terms, w, x.clone() * c);
        }
    }

    /// `L_n · self`.
    pub fn act(&self, n: i64) -> Self {
        let mut acc = BTreeMap::new();
        for (w, c) in &self.terms {
            for (w2, c2) in self.module.apply_letter(n, w).iter() {
                add_into(&mut acc, w2, c.clone() * c2);
            }
        }
        ModuleVector { module: self.module.clone(), terms: acc }
    }

    /// `⟨self| L_n` for a vector of a dual kind, in stored form.
    pub fn act_on_dual(&self, n: i64) -> Self {
        self.act(-n)
    }

    /// Apply `L_{w_1} ⋯ L_{w_k}` (rightmost letter first).
    pub fn act_word(&self, w: &[i64]) -> Self {
        let mut v = self.clone();
        for &n in w.iter().rev() {
            v = v.act(n);
        }
        v
    }

    /// Terms whose weight equals `wt`.
    pub fn graded_part(&self, wt: i64) -> Self {
        ModuleVector {
            module: self.module.clone(),
            terms: self.terms.iter().filter(|(w, _)| self.module.weight(w) == wt).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&F) -> F) -> Self {
        ModuleVector::from_terms(&self.module, self.terms.iter().map(|(w, c)| (w.clone(), f(c))))
    }
}

impl<F: Field + AsScalar> ModuleVector<F> {
    pub fn to_json(&self) -> Value {
        let kind = match self.module.kind() {
            ModuleKind::Verma { delta } => json!({"Verma": {"delta": delta.as_scalar()}}),
            ModuleKind::DualVerma { delta } => json!({"DualVerma": {"delta": delta.as_scalar()}}),
            ModuleKind::Irregular { rank, weights } => json!({"Irregular": {
                "rank": rank, "weights": weights.iter().map(AsScalar::as_scalar).collect::<Vec<_>>()}}),
            ModuleKind::DualIrregular { rank, weights } => json!({"DualIrregular": {
                "rank": rank, "weights": weights.iter().map(AsScalar::as_scalar).collect::<Vec<_>>()}}),
            ModuleKind::VacuumIrreducible => json!("VacuumIrreducible"),
        };
        json!({
            "kind": kind,
            "c": self.module.central_charge().as_scalar(),
            "terms": self.terms.iter().map(|(w, c)| json!({"word": w, "coef": c.as_scalar()})).collect::<Vec<_>>(),
        })
    }
}

/// Expansion of `L_{w_1} ⋯ L_{w_k}|cyc⟩` in the canonical basis.
pub fn reduce_word<F: Field>(word: &[i64], module: &Arc<Module<F>>) -> ModuleVector<F> {
    module.cyclic_vector().act_word(word)
}

/// `L_n · v`.
pub fn act<F: Field>(n: i64, v: &ModuleVector<F>) -> ModuleVector<F> {
    v.act(n)
}

/// Canonical word `L_{-ν_1} ⋯ L_{-ν_ℓ}` of a partition.
pub fn partition_word(p: &crate::combinatorics::Partition) -> Word {
    p.parts().iter().map(|&x| -(x as i64)).collect()
}

/// Gram matrix `⟨Δ| L_μ^† L_{-ν} |Δ⟩` in [`enumerate_partitions`] order.
pub fn shapovalov<F: Field>(delta: &F, c: &F, level: usize) -> Vec<Vec<F>> {
    let m = Module::verma(delta.clone(), c.clone());
    shapovalov_in(&m, level)
}

pub fn shapovalov_in<F: Field>(m: &Arc<Module<F>>, level: usize) -> Vec<Vec<F>> {
    let parts = enumerate_partitions(level);
    let vecs: Vec<ModuleVector<F>> = parts.iter().map(|p| ModuleVector::basis(m, partition_word(p))).collect();
    parts
        .iter()
        .map(|mu| {
            vecs.iter()
                .map(|v| {
                    let mut x = v.clone();
                    for &k in mu.parts() {
                        x = x.act(k as i64);
                    }
                    x.coefficient(&[])
                })
                .collect()
        })
        .collect()
}

/// Eigenvalue of `⟨cyc_u| L_l`, or an error if `L_l` is free on the dual side.
fn dual_eigen<F: Field>(u: &Module<F>, l: i64) -> Result<F, VirasoroError> {
    match u.cyclic(-l) {
        Cyclic::Scalar(s) => Ok(s),
        Cyclic::Free => Err(VirasoroError::IncompatibleKinds(format!(
            "L_{l} does not act by a scalar on the dual cyclic vector of {}",
            u.kind.name()
        ))),
    }
}

fn check_pair<F: Field>(u: &ModuleKind<F>, v: &ModuleKind<F>) -> Result<(), VirasoroError> {
    use ModuleKind::*;
    let ok = match (u, v) {
        (DualVerma { delta: a }, Verma { delta: b }) => a == b,
        (DualVerma { .. }, Irregular { rank: 1, .. }) => true,
        (VacuumIrreducible, Irregular { rank: 2, .. }) => true,
        (DualIrregular { rank: 1, .. }, Verma { .. }) => true,
        (DualIrregular { rank: 2, .. }, VacuumIrreducible) => true,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(VirasoroError::IncompatibleKinds(format!("{} with {}", u.name(), v.name())))
    }
}

/// The bilinear pairing `⟨u|v⟩` with `⟨cyc|cyc⟩ = 1`.
pub fn pair<F: Field>(u: &ModuleVector<F>, v: &ModuleVector<F>) -> Result<F, VirasoroError> {
    check_pair(u.module.kind(), v.module.kind())?;
    if u.module.central_charge() != v.module.central_charge() {
        return Err(VirasoroError::IncompatibleKinds("central charges differ".into()));
    }
    let mut total = F::zero();
    for (uw, uc) in u.terms() {
        let mut x = v.clone();
        for &m in uw {
            x = x.act(-m);
        }
        for (w, c) in x.terms() {
            let mut val = uc.clone() * c;
            for &l in w {
                if val.is_zero() {
                    break;
                }
                val = val * &dual_eigen(&u.module, l)?;
            }
            total = total + val;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, Q};

    fn verma(d: Q, c: Q) -> Arc<Module<Q>> {
        Module::verma(d, c)
    }

    #[test]
    fn one_commutator() {
        let d = rat(3, 7);
        let m = verma(d.clone(), rat(1, 2));
        let v = reduce_word(&[1, -1], &m);
        assert_eq!(v, m.cyclic_vector().scale(&(d * rat(2, 1))));
    }

    #[test]
    fn central_term() {
        let (d, c) = (rat(3, 7), rat(5, 2));
        let m = verma(d.clone(), c.clone());
        let v = reduce_word(&[2, -2], &m);
        assert_eq!(v.coefficient(&[]), d * rat(4, 1) + c / rat(2, 1));
    }

    #[test]
    fn grading_letter() {
        let d = rat(3, 7);
        let m = verma(d.clone(), rat(1, 1));
        let v = reduce_word(&[0, -1], &m);
        assert_eq!(v, ModuleVector::basis(&m, vec![-1]).scale(&(d + rat(1, 1))));
    }

    #[test]
    fn two_commutators() {
        let d = rat(2, 9);
        let m = verma(d.clone(), rat(1, 1));
        let v = ModuleVector::basis(&m, vec![-1, -1]).act(1);
        assert_eq!(v, ModuleVector::basis(&m, vec![-1]).scale(&(d * rat(4, 1) + rat(2, 1))));
        assert!(m.cyclic_vector().act(3).is_zero());
    }

    #[test]
    fn shapovalov_small_levels() {
        let (d, c) = (rat(3, 5), rat(7, 3));
        assert_eq!(shapovalov(&d, &c, 0), vec![vec![rat(1, 1)]]);
        assert_eq!(shapovalov(&d, &c, 1), vec![vec![d.clone() * rat(2, 1)]]);
        let g = shapovalov(&d, &c, 2);
        // enumerate_partitions order: (2), (1,1)
        let four = rat(4, 1);
        assert_eq!(g[0][0], four.clone() * &d + c.clone() / rat(2, 1));
        assert_eq!(g[0][1], rat(6, 1) * &d);
        assert_eq!(g[1][0], rat(6, 1) * &d);
        assert_eq!(g[1][1], four * &d * (rat(2, 1) * &d + rat(1, 1)));
    }

    #[test]
    fn simple_pairings() {
        let d = rat(3, 5);
        let m = verma(d.clone(), rat(1, 1));
        let dm = Module::new(ModuleKind::DualVerma { delta: d.clone() }, rat(1, 1));
        assert_eq!(pair(&dm.cyclic_vector(), &m.cyclic_vector()).unwrap(), rat(1, 1));
        let u = ModuleVector::basis(&dm, vec![-1]);
        assert_eq!(pair(&u, &ModuleVector::basis(&m, vec![-1])).unwrap(), rat(2, 1) * &d);
        assert_eq!(pair(&dm.cyclic_vector(), &ModuleVector::basis(&m, vec![-2])).unwrap(), rat(0, 1));
    }

    #[test]
    fn irregular_cyclic_relations() {
        let m = Module::irregular(1, vec![rat(2, 1), rat(3, 1)], rat(1, 1));
        let v = m.cyclic_vector();
        assert_eq!(v.act(1).coefficient(&[]), rat(2, 1));
        assert_eq!(v.act(2).coefficient(&[]), rat(3, 1));
        assert!(v.act(3).is_zero());
        assert_eq!(v.act(0).terms().keys().next().unwrap(), &vec![0]);
    }

    #[test]
    fn vacuum_kills_minus_one() {
        let m: Arc<Module<Q>> = Module::new(ModuleKind::VacuumIrreducible, rat(1, 2));
        assert!(m.cyclic_vector().act(-1).is_zero());
        let v = ModuleVector::basis(&m, vec![-2]).act(2);
        assert_eq!(v.coefficient(&[]), rat(1, 4));
    }
}
