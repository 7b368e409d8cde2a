use serde::{Deserialize, Serialize};

use crate::error::{HtcError, Result};

/// Uniform frequency grid `min, min + step, …` up to `max` (inclusive
/// when `max − min` is a multiple of `step`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            min: -2.5,
            max: 2.5,
            step: 0.002,
        }
    }
}

impl Grid {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        let g = Self { min, max, step };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(HtcError::InvalidArgument(format!(
                "grid needs finite min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(HtcError::InvalidArgument(format!(
                "grid step must be positive, got {}",
                self.step
            )));
        }
        if self.len() > 50_000_000 {
            return Err(HtcError::InvalidArgument(format!(
                "grid has {} points",
                self.len()
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        ((self.max - self.min) / self.step * (1.0 + 1e-12)).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.min + k as f64 * self.step).collect()
    }
}
