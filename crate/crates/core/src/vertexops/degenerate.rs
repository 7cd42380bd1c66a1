use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::compose::{direct_composition, rearrange};
use super::{irregular_vo_coeffs, regular_vo_coeffs, VoError};
use crate::combinatorics::enumerate_partitions;
use crate::heisenberg::{apply_exp_vo_at, delta_of_lambda, lambda_of_lambdas, to_fock, FockConfig, FockVector};
use crate::scalars::{linalg, rat, rational_to_string, Field, RatFunc, Q};
use crate::virasoro::{partition_word, shapovalov, Module, ModuleVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Two regular operators merging into a rank-1 operator.
    Rank0To1,
    /// Free-field exponential composed with a rank-`r` operator, merging into rank `r + 1`.
    RankUp { r: usize },
}

impl Scheme {
    pub fn name(&self) -> String {
        match self {
            Scheme::Rank0To1 => "rank0to1".into(),
            Scheme::RankUp { r } => format!("rank{r}to{}", r + 1),
        }
    }
}

/// Parameters of a confluence check; all source data are rational functions of `ε`.
#[derive(Debug, Clone)]
pub struct DegenerationSpec {
    pub scheme: Scheme,
    /// `c_0..c_{r+1}` of the limiting operator.
    pub charges: Vec<Q>,
    pub beta: Q,
    pub delta_w: Q,
    pub rho: Q,
    /// Highest `w`-order `K` checked.
    pub k_max: usize,
    /// Highest level (Verma or Fock) compared within each `R_k`.
    pub max_level: usize,
    /// Added to the mixing exponent `A`; nonzero values are deliberate spoilers.
    pub a_shift: Q,
}

pub fn rank0_to_1_spec(c0: Q, c1: Q, beta: Q, delta: Q, rho: Q, k_max: usize) -> DegenerationSpec {
    DegenerationSpec { scheme: Scheme::Rank0To1, charges: vec![c0, c1], beta, delta_w: delta, rho, k_max, max_level: k_max + 1, a_shift: rat(0, 1) }
}

pub fn rank_up_spec(charges: Vec<Q>, beta: Q, delta_w: Q, rho: Q, k_max: usize) -> DegenerationSpec {
    let r = charges.len() - 2;
    DegenerationSpec { scheme: Scheme::RankUp { r }, charges, beta, delta_w, rho, k_max, max_level: k_max + 1, a_shift: rat(0, 1) }
}

fn k(q: &Q) -> RatFunc {
    RatFunc::constant(q.clone())
}

impl DegenerationSpec {
    fn c(&self, j: usize) -> RatFunc {
        k(&self.charges[j])
    }

    /// `A` as a rational function of `ε`, including any spoiler shift.
    pub fn mixing_exponent(&self) -> RatFunc {
        let top = self.charges.len() - 1;
        let mut a = k(&self.beta) * &(self.c(0) - k(&self.rho) * &k(&rat(2, 1)) + k(&self.beta)) * &k(&rat(1, 2)) - k(&self.delta_w);
        for j in 1..=top {
            a = a + RatFunc::eps_pow(self.charges[j].clone() * &self.beta, -(j as i64));
        }
        a + k(&self.a_shift)
    }

    /// Source parameters after substitution, by name.
    pub fn substitutions(&self) -> Vec<(String, RatFunc)> {
        let half = k(&rat(1, 2));
        let eps_inv = |c: &Q, p: i64| RatFunc::eps_pow(c.clone(), -p);
        let mut out = Vec::new();
        match self.scheme {
            Scheme::Rank0To1 => {
                let l1 = -eps_inv(&self.charges[1], 1) + self.c(0) * &half;
                let l3 = l1.clone() + k(&self.beta);
                let l4 = eps_inv(&self.charges[1], 1) + self.c(0) * &half;
                let rho = k(&self.rho);
                out.push(("lambda1".into(), l1.clone()));
                out.push(("lambda3".into(), l3.clone()));
                out.push(("lambda4".into(), l4.clone()));
                out.push(("delta1".into(), delta_of_lambda(&l1, &rho)));
                out.push(("delta2".into(), k(&self.delta_w)));
                out.push(("delta3".into(), delta_of_lambda(&l3, &rho)));
                out.push(("delta4".into(), delta_of_lambda(&l4, &rho)));
                out.push(("delta5".into(), delta_of_lambda(&(l3 + l4), &rho)));
            }
            Scheme::RankUp { r } => {
                let mut lz = self.c(0) * &half;
                for j in 1..=r + 1 {
                    lz = lz + eps_inv(&self.charges[j], j as i64);
                }
                out.push(("lambda_z".into(), lz));
                for j in 0..=r {
                    let mut l = if j == 0 { self.c(0) * &half } else { RatFunc::zero() };
                    for i in j + 1..=r + 1 {
                        l = l - eps_inv(&self.charges[i], (i - j) as i64);
                    }
                    out.push((format!("lambda{j}"), l));
                }
            }
        }
        out.push(("A".into(), self.mixing_exponent()));
        out.push(("z".into(), RatFunc::eps()));
        out
    }

    fn sub(&self, name: &str) -> RatFunc {
        self.substitutions().into_iter().find(|(n, _)| n == name).map(|(_, v)| v).unwrap()
    }
}

#[derive(Debug, Clone)]
pub struct OrderCheck {
    pub order: usize,
    /// Smallest `ε`-valuation among the nonzero coefficients of `R_k`.
    pub min_valuation: Option<i64>,
    pub matches: bool,
    pub difference: Option<String>,
}

#[derive(Debug, Clone)]
pub struct DegenerationReport {
    pub scheme: Scheme,
    pub orders: Vec<OrderCheck>,
    /// `lim (α_w + A)` against the target `α`.
    pub alpha_limit: Q,
    pub alpha_target: Q,
    /// `lim (β^{(w)}_j - A ε^j / j)` against the target charges.
    pub betas_limit: Vec<Q>,
    pub betas_target: Vec<Q>,
    /// Exponents of the normalization `(-1)^A z^{-α_z + A} e^{-Σ β^{(z)}_j z^{-j}}`.
    pub normalization_z_exponent: RatFunc,
    pub normalization_betas: Vec<RatFunc>,
    pub failure: Option<VoError>,
}

impl DegenerationReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn verdict(&self) -> &'static str {
        match &self.failure {
            None => "match",
            Some(VoError::NegativeValuation { .. }) => "negative_valuation",
            Some(_) => "mismatch",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "scheme": self.scheme.name(),
            "verdict": self.verdict(),
            "failure": self.failure.as_ref().map(|e| e.to_string()),
            "orders": self.orders.iter().map(|o| json!({
                "k": o.order,
                "min_valuation": o.min_valuation,
                "match": o.matches,
                "difference": o.difference,
            })).collect::<Vec<_>>(),
            "alpha": {"limit": rational_to_string(&self.alpha_limit), "target": rational_to_string(&self.alpha_target)},
            "betas": {
                "limit": self.betas_limit.iter().map(rational_to_string).collect::<Vec<_>>(),
                "target": self.betas_target.iter().map(rational_to_string).collect::<Vec<_>>(),
            },
            "normalization": {
                "z_exponent": self.normalization_z_exponent.to_string(),
                "betas_z": self.normalization_betas.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            },
        })
    }
}

fn limit_of(f: &RatFunc) -> Result<Q, i64> {
    match f.valuation() {
        None => Ok(rat(0, 1)),
        Some(v) if v < 0 => Err(v),
        Some(_) => Ok(f.limit().unwrap_or_else(|| rat(0, 1))),
    }
}

fn scalar_limit(f: &RatFunc, what: &str) -> Result<Q, VoError> {
    limit_of(f).map_err(|v| VoError::Unsupported(format!("{what} diverges like ε^{v}")))
}

/// Check a confluence limit order by order.
pub fn degeneration_report(spec: &DegenerationSpec) -> Result<DegenerationReport, VoError> {
    match spec.scheme {
        Scheme::Rank0To1 => rank0_to_1(spec),
        Scheme::RankUp { r } => rank_up(spec, r),
    }
}

/// Whittaker vector of `M_Δ` with `L_n W = Λ_n W` (`n = 1, 2`), level by level.
pub(crate) fn whittaker_levels(delta: &Q, c: &Q, l1: &Q, l2: &Q, max_level: usize) -> Result<Vec<ModuleVector<Q>>, VoError> {
    let module = Module::verma(delta.clone(), c.clone());
    (0..=max_level)
        .map(|level| {
            let parts = enumerate_partitions(level);
            let b: Vec<Q> = parts
                .iter()
                .map(|mu| {
                    mu.parts().iter().fold(rat(1, 1), |acc, &p| match p {
                        1 => acc * l1,
                        2 => acc * l2,
                        _ => rat(0, 1),
                    })
                })
                .collect();
            let g = shapovalov(delta, c, level);
            let x = linalg::solve(&g, &b).map_err(|_| VoError::SingularModule { level })?;
            Ok(ModuleVector::from_terms(&module, parts.iter().map(partition_word).zip(x)))
        })
        .collect()
}

/// Level-`ℓ` part of a rank-1 module vector realized on the Whittaker vector.
fn embed_rank1(v: &ModuleVector<Q>, whit: &[ModuleVector<Q>], level: usize) -> ModuleVector<Q> {
    let mut out = ModuleVector::zero(whit[0].module());
    for (w, c) in v.terms() {
        let raise: i64 = w.iter().map(|&n| -n).sum();
        if raise as usize > level {
            continue;
        }
        let x = whit[level - raise as usize].act_word(w);
        out.add_scaled(&x, c);
    }
    out
}

fn rank0_to_1(spec: &DegenerationSpec) -> Result<DegenerationReport, VoError> {
    let (kk, lmax) = (spec.k_max, spec.max_level);
    let rho = k(&spec.rho);
    let c = RatFunc::one() - k(&rat(12, 1)) * &rho * &rho;
    let (d1, d2, d3, d4, d5) = (spec.sub("delta1"), spec.sub("delta2"), spec.sub("delta3"), spec.sub("delta4"), spec.sub("delta5"));
    let a = spec.mixing_exponent();
    let eps = RatFunc::eps();

    let inner = regular_vo_coeffs(&d1, &d2, &d3, &c, kk)?;
    let outer = regular_vo_coeffs(&d3, &d4, &d5, &c, lmax)?;
    let x = direct_composition(&outer, &inner, kk, lmax)?;
    let terms = rearrange(&x, &a, None);

    // target: rank-1 operator with Λ = (c_1(c_0 - 2ρ), c_1²/2), β_1 = -c_1 β
    let (c0, c1) = (&spec.charges[0], &spec.charges[1]);
    let cq = rat(1, 1) - rat(12, 1) * &spec.rho * &spec.rho;
    let lam = lambda_of_lambdas(&[c0.clone(), c1.clone()], &spec.rho, 1)?;
    let beta1 = -(c1.clone() * &spec.beta);
    let target = irregular_vo_coeffs(1, &lam, &beta1, &spec.delta_w, &cq, kk)?;
    let delta5 = scalar_limit(&d5, "Δ_5")?;
    let tw = match target.target.kind() {
        crate::virasoro::ModuleKind::Irregular { weights, .. } => weights.clone(),
        _ => unreachable!(),
    };
    let whit = whittaker_levels(&delta5, &cq, &tw[0], &tw[1], lmax)?;

    let alpha_limit = scalar_limit(&(inner.alpha.clone() + &a), "α_w + A")?;
    let betas_limit = vec![scalar_limit(&-(a.clone() * &eps), "A ε")?];
    let mut report = DegenerationReport {
        scheme: spec.scheme,
        orders: Vec::new(),
        alpha_limit,
        alpha_target: target.alpha.clone(),
        betas_limit,
        betas_target: target.betas.clone(),
        normalization_z_exponent: a.clone() - &outer.alpha,
        normalization_betas: Vec::new(),
        failure: None,
    };

    let module_q = whit[0].module().clone();
    for (kidx, rk) in terms.iter().enumerate() {
        let mut check = OrderCheck { order: kidx, min_valuation: None, matches: true, difference: None };
        let mut diff_parts = Vec::new();
        for (level, v) in rk.iter().enumerate() {
            let scaled = v.scale(&RatFunc::eps_pow(rat(1, 1), level as i64 - kidx as i64));
            let mut lim = BTreeMap::new();
            for (w, f) in scaled.terms() {
                let val = f.valuation().unwrap_or(i64::MAX);
                check.min_valuation = Some(check.min_valuation.map_or(val, |m: i64| m.min(val)));
                match limit_of(f) {
                    Ok(q) => {
                        lim.insert(w.clone(), q);
                    }
                    Err(v) => {
                        report.orders.push(check);
                        report.failure = Some(VoError::NegativeValuation { order: kidx, level, word: w.clone(), valuation: v });
                        return Ok(report);
                    }
                }
            }
            let got = ModuleVector::from_terms(&module_q, lim);
            let want = embed_rank1(&target.coeffs[kidx], &whit, level);
            if got != want {
                check.matches = false;
                diff_parts.push(format!("level {level}: {:?}", want.sub(&got).terms()));
            }
        }
        if !check.matches {
            check.difference = Some(diff_parts.join("; "));
        }
        report.orders.push(check);
    }
    finish(report)
}

fn finish(mut report: DegenerationReport) -> Result<DegenerationReport, VoError> {
    if report.failure.is_none() {
        if let Some(bad) = report.orders.iter().find(|o| !o.matches) {
            report.failure = Some(VoError::MismatchAtOrder { order: bad.order, difference: bad.difference.clone().unwrap_or_default() });
        } else if report.alpha_limit != report.alpha_target {
            report.failure = Some(VoError::MismatchAtOrder { order: 0, difference: "prefactor exponent".into() });
        } else if report.betas_limit != report.betas_target {
            report.failure = Some(VoError::MismatchAtOrder { order: 0, difference: "exponential charges".into() });
        }
    }
    Ok(report)
}

fn rank_up(spec: &DegenerationSpec, r: usize) -> Result<DegenerationReport, VoError> {
    if r == 0 || spec.charges.len() != r + 2 {
        return Err(VoError::Unsupported("rank-up scheme needs r ≥ 1 and c_0..c_{r+1}".into()));
    }
    let (kk, lmax) = (spec.k_max, spec.max_level);
    let rho = k(&spec.rho);
    let cfg = FockConfig::new(rho.clone());
    let c = cfg.central_charge();
    let eps = RatFunc::eps();
    let lz = spec.sub("lambda_z");
    let lambdas: Vec<RatFunc> = (0..=r).map(|j| spec.sub(&format!("lambda{j}"))).collect();
    let a = spec.mixing_exponent();
    let beta = k(&spec.beta);

    let src = lambda_of_lambdas(&lambdas, &rho, r)?;
    let beta_w_r = -(lambdas[r].clone() * &beta) * &RatFunc::from_i64(r as i64).inv().unwrap();
    let inner = irregular_vo_coeffs(r, &src, &beta_w_r, &k(&spec.delta_w), &c, kk)?;
    let mut inner_charges = lambdas.clone();
    inner_charges[0] = inner_charges[0].clone() + &beta;

    let ys: Vec<FockVector<RatFunc>> = inner
        .coeffs
        .iter()
        .map(|v| {
            let f = to_fock(v, &inner_charges, &cfg)?;
            Ok(apply_exp_vo_at(&lz, &f, &eps, lmax).2)
        })
        .collect::<Result<_, VoError>>()?;
    let x: Vec<Vec<FockVector<RatFunc>>> = ys.into_iter().map(|y| vec![y]).collect();
    let terms = rearrange(&x, &a, Some(&eps));

    // target: rank r+1 with Γ from c_0..c_{r+1}, β_{r+1} = -c_{r+1}β/(r+1)
    let cq = rat(1, 1) - rat(12, 1) * &spec.rho * &spec.rho;
    let gamma = lambda_of_lambdas(&spec.charges, &spec.rho, r + 1)?;
    let beta_top = -(spec.charges[r + 1].clone() * &spec.beta) / rat(r as i64 + 1, 1);
    let target = irregular_vo_coeffs(r + 1, &gamma, &beta_top, &spec.delta_w, &cq, kk)?;
    let mut target_charges = spec.charges.clone();
    target_charges[0] = target_charges[0].clone() + &spec.beta;
    let cfg_q = FockConfig::new(spec.rho.clone());
    let rebase_to: Vec<RatFunc> = target_charges.iter().map(k).collect();

    let alpha_limit = scalar_limit(&(inner.alpha.clone() + &a), "α_w + A")?;
    let mut betas_limit = Vec::new();
    for j in 1..=r + 1 {
        let bw = inner.betas.get(j - 1).cloned().unwrap_or_else(RatFunc::zero);
        let from_mixing = a.clone() * &eps.powi(j as i64) * &RatFunc::from_i64(j as i64).inv().unwrap();
        betas_limit.push(scalar_limit(&(bw - from_mixing), "β^(w) - Aε^j/j")?);
    }
    let base0 = lambdas[0].clone() + &beta;
    let mut report = DegenerationReport {
        scheme: spec.scheme,
        orders: Vec::new(),
        alpha_limit,
        alpha_target: target.alpha.clone(),
        betas_limit,
        betas_target: target.betas.clone(),
        normalization_z_exponent: a.clone() - lz.clone() * &base0,
        normalization_betas: (1..=r).map(|j| -(lambdas[j].clone() * &lz) * &RatFunc::from_i64(j as i64).inv().unwrap()).collect(),
        failure: None,
    };

    for (kidx, rk) in terms.iter().enumerate() {
        let mut check = OrderCheck { order: kidx, min_valuation: None, matches: true, difference: None };
        let rebased = rk[0].rebase(rebase_to.clone(), lmax);
        let mut lim = Vec::new();
        for (m, f) in &rebased.terms {
            let val = f.valuation().unwrap_or(i64::MAX);
            check.min_valuation = Some(check.min_valuation.map_or(val, |x: i64| x.min(val)));
            match limit_of(f) {
                Ok(q) => lim.push((m.clone(), q)),
                Err(v) => {
                    let level = m.iter().map(|&x| x as usize).sum();
                    report.orders.push(check);
                    report.failure = Some(VoError::NegativeValuation {
                        order: kidx,
                        level,
                        word: m.iter().map(|&x| -(x as i64)).collect(),
                        valuation: v,
                    });
                    return Ok(report);
                }
            }
        }
        let got = FockVector::from_terms(target_charges.clone(), lim);
        let want = to_fock(&target.coeffs[kidx], &target_charges, &cfg_q)?.truncate_level(lmax);
        if got != want {
            check.matches = false;
            check.difference = Some(format!("{:?}", want.sub(&got).terms));
        }
        report.orders.push(check);
    }
    finish(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank0_to_1_small() {
        let spec = rank0_to_1_spec(rat(2, 3), rat(5, 7), rat(1, 4), rat(3, 11), rat(1, 5), 1);
        let rep = degeneration_report(&spec).unwrap();
        assert!(rep.passed(), "{:?}", rep.failure);
    }

    #[test]
    fn shifted_mixing_exponent_diverges() {
        let mut spec = rank0_to_1_spec(rat(2, 3), rat(5, 7), rat(1, 4), rat(3, 11), rat(1, 5), 1);
        spec.a_shift = rat(1, 1);
        let rep = degeneration_report(&spec).unwrap();
        assert!(matches!(rep.failure, Some(VoError::NegativeValuation { order: 1, .. })));
    }

    #[test]
    fn rank1_to_2_small() {
        let spec = rank_up_spec(vec![rat(2, 3), rat(5, 7), rat(-3, 4)], rat(1, 4), rat(3, 11), rat(1, 5), 1);
        let rep = degeneration_report(&spec).unwrap();
        assert!(rep.passed(), "{:?}", rep.failure);
    }
}
