use sha2::{Digest, Sha256};

use super::{scenario_to_text, Scenario};
use crate::reduce::ReductionOrder;

/// Provenance of one run. Everything except the wall-clock time is a
/// function of the inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub scenario_hash: String,
    pub code_version: String,
    pub reduction_order: ReductionOrder,
    pub threads: usize,
    /// Free-form `key = value` lines from a grid refinement study.
    pub convergence: Vec<(String, String)>,
    pub wall_clock_s: f64,
}

impl RunManifest {
    pub fn new(scenario: &Scenario, order: ReductionOrder, threads: usize) -> Self {
        let digest = Sha256::digest(scenario_to_text(scenario).as_bytes());
        Self {
            scenario_hash: digest.iter().map(|b| format!("{b:02x}")).collect(),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            reduction_order: order,
            threads,
            convergence: Vec::new(),
            wall_clock_s: 0.0,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("scenario_sha256 = {}\n", self.scenario_hash));
        out.push_str(&format!("code_version = {}\n", self.code_version));
        out.push_str(&format!("reduction_order = {}\n", self.reduction_order.as_str()));
        out.push_str(&format!("threads = {}\n", self.threads));
        for (k, v) in &self.convergence {
            out.push_str(&format!("convergence.{k} = {v}\n"));
        }
        out.push_str(&format!("wall_clock_s = {:.3}\n", self.wall_clock_s));
        out
    }
}
