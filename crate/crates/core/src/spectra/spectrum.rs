use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Grid, PopulationModel, SpectralSeries, Stick};
use crate::eigen::{EigenSystem, Label};
use crate::error::{HtcError, Result};

/// Jump operator whose matrix elements weight a lineshape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Operator {
    /// Photon annihilation (leakage through the mirrors).
    A,
    /// Collective lowering operator (dipole emission).
    JMinus,
}

impl std::str::FromStr for Operator {
    type Err = HtcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(Self::A),
            "jminus" => Ok(Self::JMinus),
            other => Err(HtcError::UnknownOperator(other.to_string())),
        }
    }
}

/// Broadening controls shared by all spectra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LineOptions {
    /// Lower bound on every Lorentzian half width (units of ω_v).
    pub kappa_floor: f64,
    /// Non-radiative dephasing added to the absorption coherence decay κ_Gj.
    pub kappa_nr: f64,
}

impl Default for LineOptions {
    fn default() -> Self {
        Self {
            kappa_floor: 1e-3,
            kappa_nr: 0.0,
        }
    }
}

#[inline]
fn lorentzian(omega: f64, center: f64, kappa: f64) -> f64 {
    kappa / ((omega - center).powi(2) + kappa * kappa)
}

struct Line {
    center: f64,
    kappa: f64,
    weight: f64,
}

fn broaden(grid: &[f64], lines: &[Line]) -> Vec<f64> {
    grid.par_iter()
        .map(|&w| {
            lines
                .iter()
                .map(|l| l.weight * lorentzian(w, l.center, l.kappa))
                .sum()
        })
        .collect()
}

fn emission_kappa(sys: &EigenSystem, j: usize, opts: &LineOptions) -> f64 {
    (0.5 * sys.gamma()[j]).max(opts.kappa_floor)
}

fn check_operands(sys: &EigenSystem, grid: &Grid, opts: &LineOptions) -> Result<()> {
    grid.validate()?;
    if sys.is_empty() {
        return Err(HtcError::InvalidArgument("empty eigensystem".into()));
    }
    if !(opts.kappa_floor > 0.0 && opts.kappa_nr >= 0.0) {
        return Err(HtcError::InvalidArgument(
            "kappa_floor must be positive and kappa_nr non-negative".into(),
        ));
    }
    Ok(())
}

/// Emission lineshape of eigenstate `j` through `op`: one Lorentzian of half
/// width κ_j = Γ_j/2 per ground state i, centered at ω_j − ν_i and weighted
/// by |⟨ε_i|Ô|ε_j⟩|².
pub fn lineshape(
    sys: &EigenSystem,
    j: usize,
    op: Operator,
    grid: &Grid,
    opts: &LineOptions,
) -> Result<SpectralSeries> {
    check_operands(sys, grid, opts)?;
    if j >= sys.len() {
        return Err(HtcError::InvalidArgument(format!("state {j} out of range")));
    }
    let elements = match op {
        Operator::A => sys.a_elements(),
        Operator::JMinus => sys.jminus_elements(),
    };
    let kappa = emission_kappa(sys, j, opts);
    let mut lines = Vec::new();
    let mut sticks = Vec::new();
    for (i, &nu) in sys.ground_quanta().iter().enumerate() {
        let strength = elements[(i, j)].powi(2);
        if strength == 0.0 {
            continue;
        }
        let center = sys.omega()[j] - nu as f64;
        lines.push(Line {
            center,
            kappa,
            weight: strength,
        });
        sticks.push(Stick {
            omega: center,
            strength,
            j,
            i: Some(i),
            label: sys.labels()[j],
        });
    }
    let points = grid.points();
    let raw = broaden(&points, &lines);
    Ok(SpectralSeries::from_raw(points, raw, sticks))
}

/// Leakage photoluminescence `Σ_j ρ_j S_â^(j)(ω)`, keeping final states with
/// at most `nu_max_ground` vibrational quanta.
pub fn lpl_spectrum(
    sys: &EigenSystem,
    pop: &PopulationModel,
    grid: &Grid,
    nu_max_ground: u32,
    opts: &LineOptions,
) -> Result<SpectralSeries> {
    check_operands(sys, grid, opts)?;
    check_ground_cover(sys, nu_max_ground)?;
    let rho = pop.weights(sys)?;
    let a = sys.a_elements();
    let mut lines = Vec::new();
    let mut sticks = Vec::new();
    for (j, &r) in rho.iter().enumerate() {
        if r == 0.0 {
            continue;
        }
        let kappa = emission_kappa(sys, j, opts);
        for (i, &nu) in sys.ground_quanta().iter().enumerate() {
            let strength = r * a[(i, j)].powi(2);
            if nu > nu_max_ground || strength == 0.0 {
                continue;
            }
            let center = sys.omega()[j] - nu as f64;
            lines.push(Line {
                center,
                kappa,
                weight: strength,
            });
            sticks.push(Stick {
                omega: center,
                strength,
                j,
                i: Some(i),
                label: sys.labels()[j],
            });
        }
    }
    let points = grid.points();
    let raw = broaden(&points, &lines);
    Ok(SpectralSeries::from_raw(points, raw, sticks))
}

fn check_ground_cover(sys: &EigenSystem, nu_max_ground: u32) -> Result<()> {
    if nu_max_ground > sys.params().nu_max_ground {
        return Err(HtcError::InvalidArgument(format!(
            "ground basis only covers {} vibrational quanta, {nu_max_ground} requested",
            sys.params().nu_max_ground
        )));
    }
    Ok(())
}

/// Through-mirror absorption
/// `π|Ω_p|² Σ_j |aG_j|² (κ_Gj/Γ_j) F_j / ((ω − ω_j)² + κ_Gj²)` with
/// κ_Gj = Γ_j/2 + κ_nr. States with Γ_j = 0 do not absorb.
///
/// Sticks carry the relative integrated weight |aG_j|² F_j / Γ_j.
pub fn absorption_spectrum(
    sys: &EigenSystem,
    grid: &Grid,
    pump_strength: f64,
    opts: &LineOptions,
) -> Result<SpectralSeries> {
    check_operands(sys, grid, opts)?;
    let prefactor = std::f64::consts::PI * pump_strength * pump_strength;
    let mut lines = Vec::new();
    let mut sticks = Vec::new();
    for j in 0..sys.len() {
        let gamma = sys.gamma()[j];
        let weight = sys.a_g()[j].powi(2) * sys.f_emission()[j];
        if !(gamma > 0.0) || weight == 0.0 {
            continue;
        }
        let kappa = 0.5 * gamma + opts.kappa_nr;
        lines.push(Line {
            center: sys.omega()[j],
            kappa,
            weight: prefactor * weight / gamma,
        });
        sticks.push(Stick {
            omega: sys.omega()[j],
            strength: weight / gamma,
            j,
            i: Some(0),
            label: sys.labels()[j],
        });
    }
    let points = grid.points();
    let raw = broaden(&points, &lines);
    Ok(SpectralSeries::from_raw(points, raw, sticks))
}

/// Bound-mode absorption: sticks |μ_jG|² at ω_j and their Lorentzian
/// broadening with half width κ_Gj = Γ_j/2 + κ_nr.
pub fn bound_absorption(sys: &EigenSystem, grid: &Grid, opts: &LineOptions) -> Result<SpectralSeries> {
    check_operands(sys, grid, opts)?;
    let mut lines = Vec::new();
    let mut sticks = Vec::new();
    for j in 0..sys.len() {
        let strength = sys.mu_g()[j].powi(2);
        sticks.push(Stick {
            omega: sys.omega()[j],
            strength,
            j,
            i: Some(0),
            label: sys.labels()[j],
        });
        if strength > 0.0 {
            lines.push(Line {
                center: sys.omega()[j],
                kappa: (0.5 * sys.gamma()[j] + opts.kappa_nr).max(opts.kappa_floor),
                weight: strength,
            });
        }
    }
    let points = grid.points();
    let raw = broaden(&points, &lines);
    Ok(SpectralSeries::from_raw(points, raw, sticks))
}

/// Leakage emission at the lower-polariton frequency as a Gaussian
/// population of width `sigma_p` is swept across `omega_p`, one series per
/// entry of `nu_max_ground_list`.
///
/// The Gaussian is used with unit peak amplitude, not renormalized at each
/// ω_p, so the curves fall off when the population moves away from every
/// emitting state. The family is scaled so its largest value is 1.
pub fn ilp_curve(
    sys: &EigenSystem,
    omega_p: &[f64],
    sigma_p: f64,
    nu_max_ground_list: &[u32],
    opts: &LineOptions,
) -> Result<Vec<SpectralSeries>> {
    if omega_p.is_empty() || nu_max_ground_list.is_empty() {
        return Err(HtcError::InvalidArgument(
            "empty pump-frequency or channel list".into(),
        ));
    }
    if !(sigma_p > 0.0) {
        return Err(HtcError::InvalidArgument(format!(
            "sigma_p must be positive, got {sigma_p}"
        )));
    }
    let lp = sys
        .find(Label::LP)
        .ok_or_else(|| HtcError::InvalidArgument("no lower polariton found".into()))?;
    let w_lp = sys.omega()[lp];
    let a = sys.a_elements();

    let mut raw_family = Vec::new();
    for &nmg in nu_max_ground_list {
        check_ground_cover(sys, nmg)?;
        // Emission of each state at ω_LP with unit population.
        let at_lp: Vec<f64> = (0..sys.len())
            .map(|j| {
                let kappa = emission_kappa(sys, j, opts);
                sys.ground_quanta()
                    .iter()
                    .enumerate()
                    .filter(|&(_, &nu)| nu <= nmg)
                    .map(|(i, &nu)| a[(i, j)].powi(2) * lorentzian(w_lp, sys.omega()[j] - nu as f64, kappa))
                    .sum()
            })
            .collect();
        let raw: Vec<f64> = omega_p
            .par_iter()
            .map(|&wp| {
                (0..sys.len())
                    .map(|j| (-(sys.omega()[j] - wp).powi(2) / (2.0 * sigma_p * sigma_p)).exp() * at_lp[j])
                    .sum()
            })
            .collect();
        raw_family.push(raw);
    }
    let max = raw_family.iter().flatten().copied().fold(0.0, f64::max);
    Ok(raw_family
        .into_iter()
        .map(|raw| SpectralSeries {
            grid: omega_p.to_vec(),
            values: raw
                .iter()
                .map(|v| if max > 0.0 { v / max } else { 0.0 })
                .collect(),
            raw,
            sticks: Vec::new(),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlueShift {
    /// LPL peak minus absorption peak in the LP region (units of ω_v).
    pub delta: f64,
    pub lpl_peak: f64,
    pub absorption_peak: f64,
    /// Lower-polariton eigenvalue.
    pub lp: f64,
}

/// Half width of the region around ω_LP searched for the two peaks.
pub const LP_REGION_HALF_WIDTH: f64 = 0.5;

/// Shift of the leakage-PL maximum relative to the absorption maximum near
/// the lower polariton, with final states up to `nu_max_ground` quanta.
pub fn lp_blueshift(
    sys: &EigenSystem,
    pop: &PopulationModel,
    grid: &Grid,
    nu_max_ground: u32,
    opts: &LineOptions,
) -> Result<BlueShift> {
    let lp = sys
        .find(Label::LP)
        .ok_or_else(|| HtcError::InvalidArgument("no lower polariton found".into()))?;
    let w_lp = sys.omega()[lp];
    let lpl = lpl_spectrum(sys, pop, grid, nu_max_ground, opts)?;
    let abs = absorption_spectrum(sys, grid, 1.0, opts)?;
    let lpl_peak = region_peak(&lpl, w_lp)?;
    let absorption_peak = region_peak(&abs, w_lp)?;
    Ok(BlueShift {
        delta: lpl_peak - absorption_peak,
        lpl_peak,
        absorption_peak,
        lp: w_lp,
    })
}

fn region_peak(s: &SpectralSeries, center: f64) -> Result<f64> {
    let (lo, hi) = (center - LP_REGION_HALF_WIDTH, center + LP_REGION_HALF_WIDTH);
    let err = |reason: &str| HtcError::PeakSearch {
        lo,
        hi,
        reason: reason.to_string(),
    };
    let idx: Vec<usize> = (0..s.len())
        .filter(|&k| s.grid[k] >= lo && s.grid[k] <= hi)
        .collect();
    if idx.len() < 3 {
        return Err(err("region holds fewer than three grid points"));
    }
    let vals: Vec<f64> = idx.iter().map(|&k| s.raw[k]).collect();
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if !(max > 0.0) || max - min <= 1e-12 * max {
        return Err(err("spectrum is flat"));
    }
    let maxima: Vec<usize> = (1..vals.len() - 1)
        .filter(|&k| vals[k] > vals[k - 1] && vals[k] >= vals[k + 1] && vals[k] >= 0.5 * max)
        .collect();
    match maxima.as_slice() {
        [] => Err(err("maximum lies on the region boundary")),
        [k] => Ok(s.grid[idx[*k]]),
        _ => Err(err("several maxima above half height")),
    }
}
