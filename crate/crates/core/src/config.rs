//! Run configuration shared by the command-line front end and embedded in
//! every output.

use crate::error::{LinkError, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Samples per curve for invariants.
    pub samples: usize,
    /// Samples per curve for deformed (twisted) curves.
    pub deformed_samples: usize,
    /// Step count of the spectral-flow crossing oracle.
    pub oracle_steps: usize,
    /// Largest accepted distance of a Gauss linking integral from ℤ.
    pub tol_round: f64,
    /// Distance to ℤ and to the critical set below which spectral flow is refused.
    pub tol_critical: f64,
    /// Target accuracy of the writhe quadrature.
    pub tol_quadrature: f64,
    /// Number of candidate poles for stereographic projection.
    pub pole_grid: usize,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            samples: 256,
            deformed_samples: 512,
            oracle_steps: 2048,
            tol_round: 0.1,
            tol_critical: 1e-3,
            tol_quadrature: 1e-6,
            pole_grid: 4096,
            seed: 0,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("samples", self.samples),
            ("deformed_samples", self.deformed_samples),
            ("oracle_steps", self.oracle_steps),
            ("pole_grid", self.pole_grid),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(LinkError::InvalidParams(format!(
                "config field {name} must be positive"
            )));
        }
        let tols = [
            ("tol_round", self.tol_round),
            ("tol_critical", self.tol_critical),
            ("tol_quadrature", self.tol_quadrature),
        ];
        if let Some((name, v)) = tols.iter().find(|(_, v)| !(v.is_finite() && *v > 0.0)) {
            return Err(LinkError::InvalidParams(format!(
                "config field {name} must be positive, got {v}"
            )));
        }
        if self.tol_round >= 0.5 {
            return Err(LinkError::InvalidParams(
                "tol_round must be below 1/2".into(),
            ));
        }
        Ok(())
    }

    /// Parse a JSON object; missing fields take their defaults.
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Config = serde_json::from_str(text)
            .map_err(|e| LinkError::InvalidParams(format!("config: {e}")))?;
        c.validate()?;
        Ok(c)
    }
}
