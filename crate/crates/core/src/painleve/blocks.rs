use rayon::prelude::*;

use super::{PainleveError, TauParams};
use crate::agt::{block_series_agt, BlockParams};
use crate::heisenberg::lambda_of_lambdas;
use crate::scalars::{rat, Field, PrefactoredSeries, Q};
use crate::vertexops::{irregular_vo_coeffs, regular_vo_coeffs, vo_on_vector, VOData};
use crate::virasoro::{pair, Module, ModuleKind, ModuleVector};

fn normalized(alpha: Q, betas: Vec<Q>, coeffs: Vec<Q>) -> Result<PrefactoredSeries<Q>, PainleveError> {
    let lead = coeffs.first().and_then(|c| c.inv()).ok_or(PainleveError::SingularPairing)?;
    Ok(PrefactoredSeries { alpha, betas, coeffs: coeffs.into_iter().map(|c| c * &lead).collect() })
}

fn pair_all(bra: &ModuleVector<Q>, vo: &VOData<Q>, order: usize) -> Result<Vec<Q>, PainleveError> {
    vo.coeffs[..=order].par_iter().map(|v| Ok(pair(bra, v)?)).collect()
}

/// `⟨θ_∞²| Φ^{θ_t²}(t) Φ^{θ_1²}(1) |θ_0²⟩` as a series in `1/t`, from the level-by-level solves.
pub fn vi_block_at_infty(p: &BlockParams<Q>, order: usize) -> Result<PrefactoredSeries<Q>, PainleveError> {
    let c = rat(1, 1);
    let (d0, dt, d1, dinf, ds) = (p.theta0.square(), p.thetat.square(), p.theta1.square(), p.thetainf.square(), p.sigma.square());
    let inner = regular_vo_coeffs(&d0, &d1, &ds, &c, order)?;
    let outer = regular_vo_coeffs(&ds, &dt, &dinf, &c, 0)?;
    let dual = Module::new(ModuleKind::DualVerma { delta: dinf.clone() }, c);
    let bra = ModuleVector::basis(&dual, Vec::new());
    let coeffs = inner.coeffs[..=order]
        .par_iter()
        .map(|v| {
            let s = vo_on_vector(&outer, v, 0)?;
            Ok(pair(&bra, &s.coeffs[0])?)
        })
        .collect::<Result<Vec<Q>, PainleveError>>()?;
    normalized(ds + dt - dinf, Vec::new(), coeffs)
}

/// The rank-1 (`V`) or rank-2 (`IV`) block at `s = ∞` for Fourier index `n`, as a series in `x = 1/s`.
///
/// The dual irregular operator is realized through the anti-involution `L_n ↦ L_{-n}`, which turns
/// `⟨Λ|Φ(s)|v⟩` into `s^{-2Δ}⟨v|Ψ(1/s)|Λ⟩` with `Ψ` an ordinary irregular vertex operator.
pub fn irregular_block_series(params: &TauParams, n: i64, order: usize) -> Result<PrefactoredSeries<Q>, PainleveError> {
    let c = rat(1, 1);
    let (vo, bra, delta) = match params {
        TauParams::VAtInfty { theta, thetat, theta0, eta, beta } => {
            let weights = [eta.clone() * theta, eta.square() * rat(1, 4)];
            let b1 = eta.clone() * (beta.clone() + rat(n, 1));
            let delta = thetat.square();
            let vo = irregular_vo_coeffs(1, &weights, &b1, &delta, &c, order)?;
            let dual = Module::new(ModuleKind::DualVerma { delta: theta0.square() }, c.clone());
            (vo, ModuleVector::basis(&dual, Vec::new()), delta)
        }
        TauParams::IVAtInfty { theta_star, thetat, beta } => {
            let weights = [theta_star.clone(), rat(0, 1), rat(1, 4)];
            let b2 = (beta.clone() + rat(n, 1)) * rat(1, 2);
            let delta = thetat.square();
            let vo = irregular_vo_coeffs(2, &weights, &b2, &delta, &c, order)?;
            let vac = Module::new(ModuleKind::VacuumIrreducible, c.clone());
            (vo, ModuleVector::basis(&vac, Vec::new()), delta)
        }
        _ => return Err(PainleveError::InvalidSpec("irregular blocks exist only for V_at_infty and IV_at_infty".into())),
    };
    let coeffs = pair_all(&bra, &vo, order)?;
    normalized(vo.alpha.clone() + delta.scale_i64(2), vo.betas.clone(), coeffs)
}

/// Block of Fourier index `n`; the variable is `t` for `VI_at_0` and the inverse variable otherwise.
pub fn mode_block(params: &TauParams, n: i64, order: usize) -> Result<PrefactoredSeries<Q>, PainleveError> {
    match params {
        TauParams::VIAt0 { theta0, thetat, theta1, thetainf, sigma } => {
            let p = BlockParams { theta0: theta0.clone(), thetat: thetat.clone(), theta1: theta1.clone(), thetainf: thetainf.clone(), sigma: sigma.clone() + rat(n, 1) };
            Ok(block_series_agt(&p, order)?)
        }
        TauParams::VIAtInfty { theta0, thetat, theta1, thetainf, sigma } => {
            let p = BlockParams { theta0: theta0.clone(), thetat: thetat.clone(), theta1: theta1.clone(), thetainf: thetainf.clone(), sigma: sigma.clone() + rat(n, 1) };
            vi_block_at_infty(&p, order)
        }
        _ => irregular_block_series(params, n, order),
    }
}

/// `⟨0|Φ^{Δ}_{0,Δ}(z)|W⟩` for the Whittaker vector `W ∈ M_Δ` with `L_1 W = Λ_1 W`, `L_2 W = Λ_2 W`,
/// as a series in `1/z`.
pub fn vacuum_whittaker_block(delta: &Q, lambda1: &Q, lambda2: &Q, c: &Q, order: usize) -> Result<PrefactoredSeries<Q>, PainleveError> {
    let whit = crate::vertexops::whittaker_levels(delta, c, lambda1, lambda2, order)?;
    let vo = regular_vo_coeffs(delta, delta, &rat(0, 1), c, 0)?;
    let dual = Module::new(ModuleKind::DualVerma { delta: rat(0, 1) }, c.clone());
    let bra = ModuleVector::basis(&dual, Vec::new());
    let coeffs = whit
        .par_iter()
        .map(|w| {
            let s = vo_on_vector(&vo, w, 0)?;
            Ok(pair(&bra, &s.coeffs[0])?)
        })
        .collect::<Result<Vec<Q>, PainleveError>>()?;
    Ok(PrefactoredSeries { alpha: delta.scale_i64(2), betas: Vec::new(), coeffs })
}

/// `⟨Δ(c_0 + β)| Φ^{Δ}(t) |Λ⟩` for the rank-1 operator reached by the rank 0 → 1 confluence, in powers of `t`.
pub fn three_point_irregular_block(c0: &Q, c1: &Q, beta: &Q, delta: &Q, rho: &Q, order: usize) -> Result<PrefactoredSeries<Q>, PainleveError> {
    let c = rat(1, 1) - rho.square() * rat(12, 1);
    let lam = lambda_of_lambdas(&[c0.clone(), c1.clone()], rho, 1).map_err(crate::vertexops::VoError::from)?;
    let b1 = -(c1.clone() * beta);
    let vo = irregular_vo_coeffs(1, &lam, &b1, delta, &c, order)?;
    let lb = c0.clone() + beta;
    let d5 = lb.clone() * (lb - rho.scale_i64(2)) * rat(1, 2);
    let dual = Module::new(ModuleKind::DualVerma { delta: d5 }, c);
    let coeffs = pair_all(&ModuleVector::basis(&dual, Vec::new()), &vo, order)?;
    Ok(PrefactoredSeries { alpha: vo.alpha.clone(), betas: vo.betas.clone(), coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whittaker_pairing_is_exponential() {
        let (delta, l1, l2) = (rat(2, 7), rat(3, 5), rat(-1, 3));
        let b = vacuum_whittaker_block(&delta, &l1, &l2, &rat(1, 1), 3).unwrap();
        let mut fact = rat(1, 1);
        for (k, ck) in b.coeffs.iter().enumerate() {
            if k > 0 {
                fact *= rat(k as i64, 1);
            }
            assert_eq!(ck.clone(), l1.powi(k as i64) / fact.clone());
        }
    }

    #[test]
    fn irregular_blocks_are_normalized() {
        let p = TauParams::VAtInfty { theta: rat(1, 3), thetat: rat(2, 7), theta0: rat(-1, 5), eta: rat(3, 2), beta: rat(1, 4) };
        let b = irregular_block_series(&p, 1, 2).unwrap();
        assert_eq!(b.coeffs[0], rat(1, 1));
        assert_eq!(b.betas, vec![rat(3, 2) * rat(5, 4)]);
    }
}
