//! Problem files: a TOML description of domain, cone and objective expressions.
//!
//! ```toml
//! label = "quad-pair"
//! decision_dim = 1
//! objective_dim = 2
//! objectives = ["x^2", "x^2"]
//!
//! [domain]
//! lower = [-2.0]
//! upper = [2.0]
//!
//! [cone]
//! generators = [[1.0, 0.0], [0.0, 1.0]]
//! ```
//!
//! `cone.k0` and `cone.dual_generators` are optional; `continuous` and `lsc`
//! default to `true`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cone::OrderingCone;
use crate::error::{check_dim, Error, Result};
use crate::expr::Expr;
use crate::lattice::BoxDomain;
use crate::problem::VectorProblem;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeConfig {
    pub generators: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_generators: Option<Vec<Vec<f64>>>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub label: String,
    pub decision_dim: usize,
    pub objective_dim: usize,
    pub objectives: Vec<String>,
    #[serde(default = "yes")]
    pub continuous: bool,
    #[serde(default = "yes")]
    pub lsc: bool,
    pub domain: DomainConfig,
    pub cone: ConeConfig,
}

impl ProblemConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Canonical TOML rendering, used to echo the configuration in reports.
    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).unwrap_or_default()
    }

    pub fn build(&self) -> Result<VectorProblem> {
        check_dim(self.decision_dim, self.domain.lower.len())?;
        check_dim(self.objective_dim, self.objectives.len())?;
        let domain = BoxDomain::new(self.domain.lower.clone(), self.domain.upper.clone())?;
        let cone = OrderingCone::with_options(
            self.cone.generators.clone(),
            self.cone.k0.clone(),
            self.cone.dual_generators.clone(),
        )?;
        check_dim(self.objective_dim, cone.ambient_dim())?;
        let exprs = self
            .objectives
            .iter()
            .map(|s| Expr::parse(s, self.decision_dim))
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorProblem::from_exprs(self.label.clone(), domain, cone, exprs)?
            .with_flags(self.continuous, self.lsc))
    }
}
