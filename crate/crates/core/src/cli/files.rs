use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::agt::BlockParams;
use crate::painleve::{TauKind, TauParams, TauSpec};
use crate::scalars::{serde_q, Q};

pub const TAU_VI_AT_0: &str = include_str!("../../samples/tau_VI_at_0.json");
pub const TAU_VI_AT_INFTY: &str = include_str!("../../samples/tau_VI_at_infty.json");
pub const TAU_V_AT_INFTY: &str = include_str!("../../samples/tau_V_at_infty.json");
pub const TAU_IV_AT_INFTY: &str = include_str!("../../samples/tau_IV_at_infty.json");
pub const BLOCK_REGULAR: &str = include_str!("../../samples/block_regular.json");
pub const DEGENERATE_RANK0TO1: &str = include_str!("../../samples/degenerate_rank0to1.json");
pub const DEGENERATE_RANK1TO2: &str = include_str!("../../samples/degenerate_rank1to2.json");
pub const IRREGULAR_THREE_POINT: &str = include_str!("../../samples/irregular_three_point.json");
pub const SCHEMA: &str = include_str!("../../schema/params.schema.json");

/// A τ specification on disk; `n_max` and `order` may be left to the command line.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauFile {
    pub params: TauParams,
    #[serde(with = "serde_q", default = "zero")]
    pub rho: Q,
    #[serde(default)]
    pub n_max: Option<usize>,
    #[serde(default)]
    pub order: Option<usize>,
}

impl TauFile {
    pub fn into_spec(self, n_max: Option<usize>, order: Option<usize>) -> TauSpec {
        TauSpec { params: self.params, rho: self.rho, n_max: n_max.or(self.n_max).unwrap_or(1), order: order.or(self.order).unwrap_or(4) }
    }
}

pub fn tau_sample(kind: TauKind) -> &'static str {
    match kind {
        TauKind::VIAt0 => TAU_VI_AT_0,
        TauKind::VIAtInfty => TAU_VI_AT_INFTY,
        TauKind::VAtInfty => TAU_V_AT_INFTY,
        TauKind::IVAtInfty => TAU_IV_AT_INFTY,
    }
}

fn zero() -> Q {
    crate::scalars::rat(0, 1)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularBlockFile {
    #[serde(with = "serde_q")]
    pub theta0: Q,
    #[serde(with = "serde_q")]
    pub thetat: Q,
    #[serde(with = "serde_q")]
    pub theta1: Q,
    #[serde(with = "serde_q")]
    pub thetainf: Q,
    #[serde(with = "serde_q")]
    pub sigma: Q,
}

impl RegularBlockFile {
    pub fn params(&self) -> BlockParams<Q> {
        BlockParams { theta0: self.theta0.clone(), thetat: self.thetat.clone(), theta1: self.theta1.clone(), thetainf: self.thetainf.clone(), sigma: self.sigma.clone() }
    }

    pub fn from_params(p: &BlockParams<Q>) -> Self {
        RegularBlockFile { theta0: p.theta0.clone(), thetat: p.thetat.clone(), theta1: p.theta1.clone(), thetainf: p.thetainf.clone(), sigma: p.sigma.clone() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum IrregularBlockFile {
    #[serde(rename = "V_at_infty")]
    V {
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
    IV {
        #[serde(with = "serde_q")]
        theta_star: Q,
        #[serde(with = "serde_q")]
        thetat: Q,
        #[serde(with = "serde_q")]
        beta: Q,
    },
    #[serde(rename = "three_point")]
    ThreePoint {
        #[serde(with = "serde_q")]
        c0: Q,
        #[serde(with = "serde_q")]
        c1: Q,
        #[serde(with = "serde_q")]
        beta: Q,
        #[serde(with = "serde_q")]
        delta: Q,
        #[serde(with = "serde_q")]
        rho: Q,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum VoFile {
    #[serde(rename = "regular")]
    Regular {
        #[serde(with = "serde_q")]
        delta1: Q,
        #[serde(with = "serde_q")]
        delta2: Q,
        #[serde(with = "serde_q")]
        delta3: Q,
        #[serde(with = "serde_q")]
        c: Q,
    },
    #[serde(rename = "irregular")]
    Irregular {
        rank: usize,
        #[serde(with = "serde_qvec")]
        weights: Vec<Q>,
        #[serde(with = "serde_q")]
        beta_r: Q,
        #[serde(with = "serde_q")]
        delta: Q,
        #[serde(with = "serde_q")]
        c: Q,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegenerationFile {
    #[serde(with = "serde_qvec")]
    pub charges: Vec<Q>,
    #[serde(with = "serde_q")]
    pub beta: Q,
    #[serde(with = "serde_q")]
    pub delta: Q,
    #[serde(with = "serde_q")]
    pub rho: Q,
    #[serde(with = "serde_q", default = "zero")]
    pub a_shift: Q,
    #[serde(default)]
    pub max_level: Option<usize>,
}

pub mod serde_qvec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::Value;

    use crate::scalars::{parse_value_rational, rational_to_string, Q};

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(rational_to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let v = Vec::<Value>::deserialize(d)?;
        v.iter().map(|x| parse_value_rational(x).map_err(serde::de::Error::custom)).collect()
    }
}

/// Parse a parameter file; diagnostics carry the file name, line and column.
pub fn parse_str<T: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("{origin}:{}:{}: {e}", e.line(), e.column())))
}

pub fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse_str(&text, &path.display().to_string())
}
