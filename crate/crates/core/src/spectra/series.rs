use serde::Serialize;

use crate::eigen::Label;

/// One spectral line before broadening.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stick {
    /// Line frequency (units of ω_v).
    pub omega: f64,
    pub strength: f64,
    /// Emitting or absorbing eigenstate.
    pub j: usize,
    /// Ground-basis state reached, when the line has one.
    pub i: Option<usize>,
    pub label: Label,
}

/// Intensities on a frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSeries {
    pub grid: Vec<f64>,
    /// Intensities scaled so the maximum (over the series or its family) is 1.
    pub values: Vec<f64>,
    /// Unnormalized intensities.
    pub raw: Vec<f64>,
    pub sticks: Vec<Stick>,
}

impl SpectralSeries {
    /// Builds a series normalized to its own maximum.
    pub fn from_raw(grid: Vec<f64>, raw: Vec<f64>, sticks: Vec<Stick>) -> Self {
        let max = raw.iter().copied().fold(0.0, f64::max);
        let values = if max > 0.0 {
            raw.iter().map(|v| v / max).collect()
        } else {
            vec![0.0; raw.len()]
        };
        Self {
            grid,
            values,
            raw,
            sticks,
        }
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Index of the largest raw value.
    pub fn argmax(&self) -> Option<usize> {
        (0..self.len()).max_by(|&a, &b| self.raw[a].total_cmp(&self.raw[b]))
    }

    /// Trapezoid integral of the raw values.
    pub fn integral(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.raw.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum()
    }

    /// Raw value at the grid point nearest `omega`.
    pub fn value_at(&self, omega: f64) -> f64 {
        let k = (0..self.len())
            .min_by(|&a, &b| {
                (self.grid[a] - omega)
                    .abs()
                    .total_cmp(&(self.grid[b] - omega).abs())
            })
            .unwrap_or(0);
        self.raw[k]
    }

    /// Interior local maxima whose raw value is at least `rel` times the
    /// series maximum, in grid order.
    pub fn peaks(&self, rel: f64) -> Vec<usize> {
        let max = self.raw.iter().copied().fold(0.0, f64::max);
        (1..self.len().saturating_sub(1))
            .filter(|&k| {
                self.raw[k] >= rel * max && self.raw[k] > self.raw[k - 1] && self.raw[k] >= self.raw[k + 1]
            })
            .collect()
    }

    /// Total stick strength.
    pub fn stick_total(&self) -> f64 {
        self.sticks.iter().map(|s| s.strength).sum()
    }
}
