//! Maximum-likelihood estimation and degree-based statistics.

pub mod dissociated;
pub mod ergm;
pub mod exch;
pub mod summarized;

use crate::classdist::ClassDistribution;
use crate::mobius::MobiusVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitStatus {
    Optimal,
    /// The likelihood is maximized only in the limit (parameters diverge).
    Boundary,
    /// Several distinct maximizers share the optimal likelihood.
    NonUnique,
    Failed,
}

impl FitStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FitStatus::Optimal => "optimal",
            FitStatus::Boundary => "boundary",
            FitStatus::NonUnique => "non_unique",
            FitStatus::Failed => "failed",
        }
    }
}

/// Outcome of a likelihood fit.
#[derive(Clone, Debug)]
pub struct FitReport {
    pub family: String,
    pub status: FitStatus,
    pub loglik: f64,
    pub z: Option<MobiusVector<f64>>,
    pub q: Option<ClassDistribution<f64>>,
    /// Canonical parameters by statistic name (exponential families only).
    pub nu: Vec<(String, f64)>,
    pub constraint_residual: f64,
    pub kkt_residual: f64,
    pub restarts_used: usize,
    pub iterations: usize,
    /// Extreme maximizers when the optimum is not unique.
    pub endpoints: Vec<ClassDistribution<f64>>,
}

impl FitReport {
    pub fn likelihood(&self) -> f64 {
        self.loglik.exp()
    }
}
