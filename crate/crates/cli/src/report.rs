//! JSON report layout. Field order is fixed so identical runs serialize to
//! identical bytes.

use std::collections::BTreeMap;

use serde::Serialize;

use wlc_core::anomaly::{PairRecord, Verdict, Witness};
use wlc_core::phasespace::{PhasePoint, SamplingDomain};
use wlc_core::worldline::GroupElement;

use crate::config::RunConfig;

pub const SCHEMA: u32 = 1;
pub const TOOL: &str = "wlc";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: RunConfig,
    pub domain: SamplingDomain,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairEntry {
    pub lhs: String,
    pub rhs: String,
    pub sup_defect: f64,
    pub worst_point: Option<PhasePoint>,
}

impl From<&PairRecord> for PairEntry {
    fn from(r: &PairRecord) -> Self {
        PairEntry {
            lhs: r.lhs.clone(),
            rhs: r.rhs.clone(),
            sup_defect: r.sup_defect,
            worst_point: r.worst_point.clone(),
        }
    }
}

/// Report of `check` and `conditions`.
#[derive(Debug, Clone, Serialize)]
pub struct AnomalyJson {
    #[serde(flatten)]
    pub header: Header,
    pub group: String,
    pub law: String,
    pub samples: usize,
    pub seed: u64,
    pub rejected_samples: u64,
    pub wall_time_s: Option<f64>,
    pub pairs: Vec<PairEntry>,
    /// Condition sup residuals keyed `I`, `II`, `IIIG`, `IIIP`.
    pub conditions: BTreeMap<String, f64>,
    /// Conditions that enter the verdict of `conditions`.
    pub required_conditions: Vec<String>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CovarianceJson {
    #[serde(flatten)]
    pub header: Header,
    pub law: String,
    pub element: GroupElement,
    pub initial: PhasePoint,
    pub steps: usize,
    pub wall_time_s: Option<f64>,
    pub residual: f64,
    pub trimmed_fraction: f64,
    pub tol: f64,
    pub witness_threshold: f64,
    pub verdict: Verdict,
    pub witness: Option<CovarianceWitness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CovarianceWitness {
    pub residual: f64,
    pub element: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub key: String,
    pub dim: Option<usize>,
    pub kinematics: String,
    pub params: Vec<&'static str>,
    pub basis: Vec<String>,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports contain only finite-or-null numbers");
    s.push('\n');
    s
}
