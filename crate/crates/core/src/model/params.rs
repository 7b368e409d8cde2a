use serde::{Deserialize, Serialize};

use crate::error::{HtcError, Result};

/// Physical and truncation parameters of the Holstein–Tavis–Cummings model.
///
/// Every frequency and rate is expressed in units of the vibrational
/// frequency `vib_freq`, so the Hamiltonian is assembled in dimensionless
/// form; `vib_freq` only converts results back to physical units.
/// Energies are measured from the 0-0 transition (rotating frame of a cavity
/// at `omega_00 - detuning`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelParams {
    /// Number of emitters N.
    pub n_molecules: usize,
    /// Huang–Rhys factor λ².
    pub huang_rhys: f64,
    /// Vibrational frequency ω_v in physical units (the energy unit).
    pub vib_freq: f64,
    /// Single-particle vacuum Rabi frequency Ω / ω_v.
    pub rabi_single: f64,
    /// Δ = ω_00 − ω_c, in units of ω_v.
    pub detuning: f64,
    /// Empty-cavity photon decay rate κ / ω_v.
    pub kappa: f64,
    /// Size-enhanced fluorescence rate N·γ_e / ω_v.
    pub gamma_e_collective: f64,
    /// Maximum vibrational quanta per molecule in the excitation manifold.
    pub nu_max: u32,
    /// Maximum total vibrational quanta of the ground-manifold final states.
    pub nu_max_ground: u32,
    /// Molecular transition dipole μ.
    pub dipole_unit: f64,
    /// Allow photon states dressed by two vibrationally excited molecules.
    pub photon_dressing: bool,
    /// Refuse to enumerate bases larger than this.
    pub basis_cap: usize,
}

impl Default for ModelParams {
    fn default() -> Self {
        // Twenty emitters at the critical coupling used for the organic
        // microcavity spectra: λ² = 1, √N·Ω = 2.4, κ = 0.9, Nγ_e = 3.0.
        Self {
            n_molecules: 20,
            huang_rhys: 1.0,
            vib_freq: 1.0,
            rabi_single: 2.4 / 20f64.sqrt(),
            detuning: 0.0,
            kappa: 0.9,
            gamma_e_collective: 3.0,
            nu_max: 4,
            nu_max_ground: 1,
            dipole_unit: 1.0,
            photon_dressing: false,
            basis_cap: 200_000,
        }
    }
}

impl ModelParams {
    /// Displacement λ = √(huang_rhys) along the dimensionless coordinate.
    pub fn lambda(&self) -> f64 {
        self.huang_rhys.sqrt()
    }

    /// Collective coupling √N·Ω / ω_v.
    pub fn collective_rabi(&self) -> f64 {
        (self.n_molecules as f64).sqrt() * self.rabi_single
    }

    /// Returns a copy with the single-particle coupling set from √N·Ω.
    pub fn with_collective_rabi(&self, collective: f64) -> Self {
        Self {
            rabi_single: collective / (self.n_molecules as f64).sqrt(),
            ..self.clone()
        }
    }

    pub fn with_rabi(&self, rabi_single: f64) -> Self {
        Self {
            rabi_single,
            ..self.clone()
        }
    }

    /// Vertical Franck–Condon transition frequency ω_e − ω_00 = λ² (units of ω_v).
    pub fn vertical_offset(&self) -> f64 {
        self.huang_rhys
    }

    /// Converts a dimensionless frequency to physical units.
    pub fn to_physical(&self, x: f64) -> f64 {
        x * self.vib_freq
    }

    pub fn validate(&self) -> Result<()> {
        fn bad(field: &'static str, reason: impl Into<String>) -> HtcError {
            HtcError::InvalidParams {
                field,
                reason: reason.into(),
            }
        }
        if self.n_molecules == 0 {
            return Err(bad("n_molecules", "must be at least 1"));
        }
        if !(self.vib_freq.is_finite() && self.vib_freq > 0.0) {
            return Err(bad(
                "vib_freq",
                format!("must be positive, got {}", self.vib_freq),
            ));
        }
        let non_negative = [
            ("huang_rhys", self.huang_rhys),
            ("rabi_single", self.rabi_single),
            ("kappa", self.kappa),
            ("gamma_e_collective", self.gamma_e_collective),
        ];
        for (field, value) in non_negative {
            if !(value.is_finite() && value >= 0.0) {
                return Err(bad(
                    field,
                    format!("must be finite and non-negative, got {value}"),
                ));
            }
        }
        if !self.detuning.is_finite() {
            return Err(bad("detuning", "must be finite"));
        }
        if !(self.dipole_unit.is_finite() && self.dipole_unit > 0.0) {
            return Err(bad(
                "dipole_unit",
                format!("must be positive, got {}", self.dipole_unit),
            ));
        }
        if self.basis_cap == 0 {
            return Err(bad("basis_cap", "must be positive"));
        }
        Ok(())
    }
}
