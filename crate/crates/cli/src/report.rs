//! Serialized outputs. Every JSON document is an [`Output`]: the resolved
//! run configuration under `invocation`, with the result's fields alongside.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use weylhull::absorption::{RationalJson, WalkKind};
use weylhull::arrangement::ReflectionType;
use weylhull::asymptotics::RatioRow;
use weylhull::conic::SteinerCheck;
use weylhull::sampling::{nonfinite_f64, MCEstimate};

/// Resolved flags of a run, defaults included.
pub type RunConfig = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Output<T> {
    #[serde(rename = "invocation")]
    pub config: RunConfig,
    #[serde(flatten)]
    pub result: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloatReport {
    pub family: WalkKind,
    pub n: usize,
    pub d: usize,
    pub absorb: f64,
    pub non_absorb: f64,
    pub within_hypotheses: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffsReport {
    pub family: String,
    pub n: usize,
    /// Decimal strings, lowest power first.
    pub coefficients: Vec<String>,
    pub total: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharpolyReport {
    pub dim: usize,
    pub hyperplanes: usize,
    /// Unsigned coefficients `a_0..a_n`.
    pub a: Vec<String>,
    pub regions: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionsReport {
    pub dim: usize,
    pub hyperplanes: usize,
    pub regions: usize,
    pub zaslavsky: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_vectors: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectReport {
    pub dim: usize,
    pub codim: usize,
    pub mode: String,
    pub count: usize,
    /// Count for a subspace in general position.
    pub predicted: String,
    pub general_position: bool,
    pub basis: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumesReport {
    pub cone: String,
    pub n: usize,
    pub volumes: Vec<RationalJson>,
    pub sum: RationalJson,
    /// `h_0` and `h_1`.
    pub half_tails: Vec<RationalJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfPoint {
    pub lambda: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteinerReport {
    #[serde(flatten)]
    pub check: SteinerCheck,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cdf: Vec<CdfPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CroftonReport {
    pub kind: ReflectionType,
    pub n: usize,
    pub codim: usize,
    pub estimate: MCEstimate,
    pub exact: RationalJson,
    #[serde(with = "nonfinite_f64")]
    pub z_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptReport {
    pub regime: String,
    pub kind: ReflectionType,
    pub rows: Vec<RatioRow>,
}
