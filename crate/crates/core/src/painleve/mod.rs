//! Painlevé τ functions as Fourier sums of conformal blocks, and their σ-form residuals.

mod blocks;
pub mod gamma;
mod sigma;
mod tau;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agt::AgtError;
use crate::scalars::{rat, serde_q, SeriesError, Q};
use crate::virasoro::VirasoroError;
use crate::vertexops::VoError;

pub use blocks::{irregular_block_series, mode_block, three_point_irregular_block, vacuum_whittaker_block, vi_block_at_infty};
pub use gamma::{barnes_shift, gamma, GammaProduct};
pub use sigma::{form_terms, form_value, jet_from_tau, propagated_change, residual_budget, sigma_ode_residual, Residual, ResidualBudget, SigmaForm, Source};
pub use tau::{tau_series, ModeWeight, TauJet, TauMode, TauSeries, Variable};

#[derive(Debug, Clone, Error)]
pub enum PainleveError {
    #[error("Γ pole at {0}")]
    GammaPole(String),
    #[error("the pairing with the cyclic vector vanishes")]
    SingularPairing,
    #[error("τ vanishes at the evaluation point")]
    TauZero,
    #[error("order {requested} lies past the smallest term (index {smallest}) of mode {mode}")]
    PastOptimalTruncation { requested: usize, smallest: usize, mode: i64 },
    #[error("cancellation of {lost:.1} digits exceeds the working precision of {digits} digits")]
    InsufficientPrecision { lost: f64, digits: usize },
    #[error("invalid τ specification: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Vo(#[from] VoError),
    #[error(transparent)]
    Agt(#[from] AgtError),
    #[error(transparent)]
    Virasoro(#[from] VirasoroError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TauKind {
    #[serde(rename = "VI_at_0")]
    VIAt0,
    #[serde(rename = "VI_at_infty")]
    VIAtInfty,
    #[serde(rename = "V_at_infty")]
    VAtInfty,
    #[serde(rename = "IV_at_infty")]
    IVAtInfty,
}

impl TauKind {
    pub fn name(&self) -> &'static str {
        match self {
            TauKind::VIAt0 => "VI_at_0",
            TauKind::VIAtInfty => "VI_at_infty",
            TauKind::VAtInfty => "V_at_infty",
            TauKind::IVAtInfty => "IV_at_infty",
        }
    }
}

/// Monodromy data of one τ function; `sigma` or `beta` is the integration constant shifted by the Fourier index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum TauParams {
    #[serde(rename = "VI_at_0")]
    VIAt0 {
        #[serde(with = "serde_q")]
        theta0: Q,
        #[serde(with = "serde_q")]
        thetat: Q,
        #[serde(with = "serde_q")]
        theta1: Q,
        #[serde(with = "serde_q")]
        thetainf: Q,
        #[serde(with = "serde_q")]
        sigma: Q,
    },
    #[serde(rename = "VI_at_infty")]
    VIAtInfty {
        #[serde(with = "serde_q")]
        theta0: Q,
        #[serde(with = "serde_q")]
        thetat: Q,
        #[serde(with = "serde_q")]
        theta1: Q,
        #[serde(with = "serde_q")]
        thetainf: Q,
        #[serde(with = "serde_q")]
        sigma: Q,
    },
    #[serde(rename = "V_at_infty")]
    VAtInfty {
        #[serde(with = "serde_q")]
        theta: Q,
        #[serde(with = "serde_q")]
        thetat: Q,
        #[serde(with = "serde_q")]
        theta0: Q,
        #[serde(with = "serde_q")]
        eta: Q,
        #[serde(with = "serde_q")]
        beta: Q,
    },
    #[serde(rename = "IV_at_infty")]
    IVAtInfty {
        #[serde(with = "serde_q")]
        theta_star: Q,
        #[serde(with = "serde_q")]
        thetat: Q,
        #[serde(with = "serde_q")]
        beta: Q,
    },
}

impl TauParams {
    pub fn kind(&self) -> TauKind {
        match self {
            TauParams::VIAt0 { .. } => TauKind::VIAt0,
            TauParams::VIAtInfty { .. } => TauKind::VIAtInfty,
            TauParams::VAtInfty { .. } => TauKind::VAtInfty,
            TauParams::IVAtInfty { .. } => TauKind::IVAtInfty,
        }
    }

    /// The σ-form this τ function is expected to satisfy.
    pub fn sigma_form(&self) -> SigmaForm {
        match self.clone() {
            TauParams::VIAt0 { theta0, thetat, theta1, thetainf, .. } | TauParams::VIAtInfty { theta0, thetat, theta1, thetainf, .. } => {
                SigmaForm::EVI { theta0, thetat, theta1, thetainf }
            }
            TauParams::VAtInfty { theta, thetat, theta0, eta, .. } => SigmaForm::EtildeV { theta, theta0, thetat, eta, z2: rat(0, 1) },
            TauParams::IVAtInfty { theta_star, thetat, .. } => SigmaForm::EtildeIV { theta_star, thetat },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauSpec {
    pub params: TauParams,
    /// Fourier phase.
    #[serde(with = "serde_q", default = "zero_q")]
    pub rho: Q,
    pub n_max: usize,
    /// Block order `N`.
    pub order: usize,
}

fn zero_q() -> Q {
    rat(0, 1)
}

impl TauSpec {
    pub fn validate(&self) -> Result<(), PainleveError> {
        if self.order < 1 {
            return Err(PainleveError::InvalidSpec("block order must be at least 1".into()));
        }
        if let TauParams::VAtInfty { eta, .. } = &self.params {
            if num_traits::Zero::is_zero(eta) {
                return Err(PainleveError::InvalidSpec("η must be nonzero".into()));
            }
        }
        Ok(())
    }

    /// Fourier indices in summation order: ascending `|n|`, negative first.
    pub fn modes(&self) -> Vec<i64> {
        let mut out = vec![0];
        for k in 1..=self.n_max as i64 {
            out.push(-k);
            out.push(k);
        }
        out
    }
}

/// `C(β + n) / C(β)` (or `σ + n`) through the `G(1 + x + n) / G(1 + x)` recursions.
pub fn structure_constant_ratio(params: &TauParams, n: i64) -> Result<GammaProduct, PainleveError> {
    let one = |x: Q, k: i64| barnes_shift(&x, k);
    let mut out = GammaProduct::one();
    match params {
        TauParams::VIAt0 { theta0, thetat, theta1, thetainf, sigma } | TauParams::VIAtInfty { theta0, thetat, theta1, thetainf, sigma } => {
            let (left, right) = if params.kind() == TauKind::VIAt0 { (theta0, thetainf) } else { (thetainf, theta0) };
            for e in [1, -1] {
                for e2 in [1, -1] {
                    let s = sigma.clone() * rat(e2, 1);
                    out = out.mul(&one(thetat.clone() + left.clone() * rat(e, 1) + &s, e2 * n)?);
                    out = out.mul(&one(theta1.clone() + right.clone() * rat(e, 1) + &s, e2 * n)?);
                }
                let two_s = sigma.clone() * rat(2 * e, 1);
                out = out.mul(&one(two_s, 2 * e * n)?.recip());
            }
        }
        TauParams::VAtInfty { theta, thetat, theta0, beta, .. } => {
            for e in [1, -1] {
                out = out.mul(&one(theta0.clone() * rat(e, 1) + theta - beta, -n)?);
                out = out.mul(&one(thetat.clone() + beta.clone() * rat(e, 1), e * n)?);
            }
        }
        TauParams::IVAtInfty { theta_star, thetat, beta } => {
            out = out.mul(&one(theta_star.clone() - beta, -n)?);
            for e in [1, -1] {
                out = out.mul(&one(thetat.clone() + beta.clone() * rat(e, 1), e * n)?);
            }
        }
    }
    Ok(out)
}
