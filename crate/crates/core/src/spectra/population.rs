use serde::{Deserialize, Serialize};

use crate::eigen::EigenSystem;
use crate::error::{HtcError, Result};

/// Stationary occupation ρ_j of the eigenstates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PopulationModel {
    /// ρ_j = 1/(M d_j) for states with `min ≤ ω_j ≤ max`, where M counts the
    /// distinct (degenerate-cluster) levels inside the window.
    UniformWindow { min: f64, max: f64 },
    /// ρ_j ∝ exp(−(ω_j − center)²/2σ²).
    Gaussian { center: f64, sigma: f64 },
    /// All population in one eigenstate.
    Delta { state: usize },
}

impl PopulationModel {
    /// Weights normalized to Σ_j ρ_j = 1.
    pub fn weights(&self, sys: &EigenSystem) -> Result<Vec<f64>> {
        let mut rho = self.unnormalized(sys)?;
        let total: f64 = rho.iter().sum();
        if !(total > 0.0) {
            return Err(HtcError::EmptyPopulation);
        }
        rho.iter_mut().for_each(|r| *r /= total);
        Ok(rho)
    }

    pub(crate) fn unnormalized(&self, sys: &EigenSystem) -> Result<Vec<f64>> {
        let omega = sys.omega();
        match *self {
            Self::UniformWindow { min, max } => {
                if !(min <= max) {
                    return Err(HtcError::InvalidArgument(format!(
                        "population window [{min}, {max}] is empty"
                    )));
                }
                let inside = |j: usize| omega[j] >= min && omega[j] <= max;
                let mut clusters: Vec<usize> = (0..sys.len())
                    .filter(|&j| inside(j))
                    .map(|j| sys.cluster()[j])
                    .collect();
                clusters.dedup();
                let m = clusters.len() as f64;
                Ok((0..sys.len())
                    .map(|j| {
                        if inside(j) {
                            1.0 / (m * sys.degeneracy()[j] as f64)
                        } else {
                            0.0
                        }
                    })
                    .collect())
            }
            Self::Gaussian { center, sigma } => {
                if !(sigma > 0.0) {
                    return Err(HtcError::InvalidArgument(format!(
                        "population width must be positive, got {sigma}"
                    )));
                }
                Ok(omega
                    .iter()
                    .map(|w| (-(w - center).powi(2) / (2.0 * sigma * sigma)).exp())
                    .collect())
            }
            Self::Delta { state } => {
                if state >= sys.len() {
                    return Err(HtcError::InvalidArgument(format!(
                        "state {state} out of range (system has {})",
                        sys.len()
                    )));
                }
                let mut rho = vec![0.0; sys.len()];
                rho[state] = 1.0;
                Ok(rho)
            }
        }
    }
}
