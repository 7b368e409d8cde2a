//! Run configuration: one flat TOML table, every key optional.

use std::path::Path;

use htc_core::{Grid, LineOptions, ModelParams, PopulationModel, Solver, Thresholds};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

/// Population used for leakage photoluminescence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PopulationKind {
    UniformWindow,
    Gaussian,
    Delta,
}

/// Everything a run needs. Frequencies and rates are in units of ω_v.
///
/// Keys mirror the field names; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    // Model.
    pub n_molecules: usize,
    pub huang_rhys: f64,
    pub vib_freq: f64,
    /// Collective coupling √N·Ω. Mutually exclusive with `rabi_single`.
    pub collective_rabi: Option<f64>,
    /// Single-molecule coupling Ω.
    pub rabi_single: Option<f64>,
    pub detuning: f64,
    pub kappa: f64,
    pub gamma_e_collective: f64,
    pub nu_max: u32,
    pub nu_max_ground: u32,
    pub dipole_unit: f64,
    pub photon_dressing: bool,
    pub basis_cap: usize,
    /// Replace the coupling by the critical one found in
    /// [`critical_min`, `critical_max`] before `eig` and `spectra`.
    pub at_critical: bool,
    /// `auto`, `dense` or `symmetry-adapted`.
    pub solver: Solver,

    // Classification.
    pub eps_dark: f64,
    pub eps_emit: f64,
    pub eps_weak: f64,
    pub resonance_window: f64,
    pub symmetric_min: f64,

    // Spectra.
    pub grid_min: f64,
    pub grid_max: f64,
    pub grid_step: f64,
    pub kappa_floor: f64,
    pub kappa_nr: f64,
    /// Pump coupling Ω_p scaling the absorption.
    pub pump_rabi: f64,
    pub population: PopulationKind,
    pub window_min: f64,
    /// Upper edge of the uniform population window: an estimate of the
    /// highest populated polariton, not a measured quantity.
    pub window_max: f64,
    pub population_center: f64,
    pub population_sigma: f64,
    pub population_state: usize,

    // sweep-critical: every (N, λ²) pair; empty lists fall back to the
    // model values. The bracket is in collective units √N·Ω.
    pub sweep_n_molecules: Vec<usize>,
    pub sweep_huang_rhys: Vec<f64>,
    pub critical_min: f64,
    pub critical_max: f64,

    // sweep-ilp.
    pub ilp_min: f64,
    pub ilp_max: f64,
    pub ilp_step: f64,
    pub ilp_sigma: f64,
    pub ilp_nu_max_ground: Vec<u32>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let m = ModelParams::default();
        let t = Thresholds::default();
        let g = Grid::default();
        let l = LineOptions::default();
        Self {
            n_molecules: m.n_molecules,
            huang_rhys: m.huang_rhys,
            vib_freq: m.vib_freq,
            collective_rabi: None,
            rabi_single: None,
            detuning: m.detuning,
            kappa: m.kappa,
            gamma_e_collective: m.gamma_e_collective,
            nu_max: m.nu_max,
            nu_max_ground: m.nu_max_ground,
            dipole_unit: m.dipole_unit,
            photon_dressing: m.photon_dressing,
            basis_cap: m.basis_cap,
            at_critical: false,
            solver: Solver::Auto,
            eps_dark: t.eps_dark,
            eps_emit: t.eps_emit,
            eps_weak: t.eps_weak,
            resonance_window: t.resonance_window,
            symmetric_min: t.symmetric_min,
            grid_min: g.min,
            grid_max: g.max,
            grid_step: g.step,
            kappa_floor: l.kappa_floor,
            kappa_nr: l.kappa_nr,
            pump_rabi: 1.0,
            population: PopulationKind::UniformWindow,
            window_min: g.min,
            window_max: 1.3,
            population_center: 0.0,
            population_sigma: 0.5,
            population_state: 0,
            sweep_n_molecules: Vec::new(),
            sweep_huang_rhys: Vec::new(),
            critical_min: 1.5,
            critical_max: 3.0,
            ilp_min: -2.0,
            ilp_max: 3.0,
            ilp_step: 0.01,
            ilp_sigma: 0.5,
            ilp_nu_max_ground: vec![0, 1],
        }
    }
}

impl RunConfig {
    /// Reads `path` (or the defaults when `None`) and applies `key=value`
    /// overrides. Values are parsed as TOML, falling back to a bare string.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self, CliError> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?,
            None => String::new(),
        };
        let name = path.map_or("<defaults>".to_string(), |p| p.display().to_string());
        // Parse the file on its own first so errors point at its lines.
        let config: RunConfig =
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{name}: {e}")))?;
        if overrides.is_empty() {
            return Ok(config);
        }
        let mut table: toml::Table =
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{name}: {e}")))?;
        for item in overrides {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("--set expects key=value, got `{item}`")))?;
            let key = key.trim();
            let value = value.trim();
            let parsed = toml::from_str::<toml::Table>(&format!("v = {value}"))
                .ok()
                .and_then(|mut t| t.remove("v"))
                .unwrap_or_else(|| toml::Value::String(value.to_string()));
            table.insert(key.to_string(), parsed);
        }
        table
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Config(format!("--set: {}", e.message())))
    }

    /// Model parameters, with the coupling resolved.
    pub fn model(&self) -> Result<ModelParams, CliError> {
        let base = ModelParams {
            n_molecules: self.n_molecules,
            huang_rhys: self.huang_rhys,
            vib_freq: self.vib_freq,
            detuning: self.detuning,
            kappa: self.kappa,
            gamma_e_collective: self.gamma_e_collective,
            nu_max: self.nu_max,
            nu_max_ground: self.nu_max_ground,
            dipole_unit: self.dipole_unit,
            photon_dressing: self.photon_dressing,
            basis_cap: self.basis_cap,
            ..ModelParams::default()
        };
        let p = match (self.collective_rabi, self.rabi_single) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "set either `collective_rabi` or `rabi_single`, not both".into(),
                ))
            }
            (None, Some(r)) => base.with_rabi(r),
            (Some(c), None) => base.with_collective_rabi(c),
            (None, None) => base.with_collective_rabi(ModelParams::default().collective_rabi()),
        };
        p.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(p)
    }

    pub fn thresholds(&self) -> Thresholds {
        Thresholds {
            eps_dark: self.eps_dark,
            eps_emit: self.eps_emit,
            eps_weak: self.eps_weak,
            resonance_window: self.resonance_window,
            symmetric_min: self.symmetric_min,
        }
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        Grid::new(self.grid_min, self.grid_max, self.grid_step)
            .map_err(|e| CliError::Config(format!("grid: {e}")))
    }

    pub fn line_options(&self) -> LineOptions {
        LineOptions {
            kappa_floor: self.kappa_floor,
            kappa_nr: self.kappa_nr,
        }
    }

    pub fn population_model(&self) -> PopulationModel {
        match self.population {
            PopulationKind::UniformWindow => PopulationModel::UniformWindow {
                min: self.window_min,
                max: self.window_max,
            },
            PopulationKind::Gaussian => PopulationModel::Gaussian {
                center: self.population_center,
                sigma: self.population_sigma,
            },
            PopulationKind::Delta => PopulationModel::Delta {
                state: self.population_state,
            },
        }
    }

    /// Bracket for the critical-coupling search in single-molecule units.
    pub fn critical_bracket(&self, n_molecules: usize) -> (f64, f64) {
        let root_n = (n_molecules as f64).sqrt();
        (self.critical_min / root_n, self.critical_max / root_n)
    }

    /// Canonical JSON of the effective configuration.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// SHA-256 of [`Self::canonical`], hex encoded.
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_key_is_named() {
        let err = toml::from_str::<RunConfig>("n_molecules = 3\nnmolecule = 4\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("nmolecule"), "{err}");
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn overrides_parse_as_toml() {
        let c = RunConfig::load(
            None,
            &[
                "n_molecules=3".into(),
                "solver = dense".into(),
                "sweep_huang_rhys=[0.1, 1.0]".into(),
            ],
        )
        .unwrap();
        assert_eq!(c.n_molecules, 3);
        assert_eq!(c.solver, Solver::Dense);
        assert_eq!(c.sweep_huang_rhys, vec![0.1, 1.0]);
    }

    #[test]
    fn coupling_is_resolved() {
        let c = RunConfig {
            n_molecules: 4,
            collective_rabi: Some(2.0),
            ..Default::default()
        };
        assert!((c.model().unwrap().rabi_single - 1.0).abs() < 1e-15);
        let both = RunConfig {
            rabi_single: Some(1.0),
            ..c
        };
        assert!(both.model().is_err());
    }

    #[test]
    fn hash_tracks_content() {
        let a = RunConfig::default();
        let b = RunConfig {
            kappa: 0.5,
            ..Default::default()
        };
        assert_eq!(a.hash(), RunConfig::default().hash());
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
