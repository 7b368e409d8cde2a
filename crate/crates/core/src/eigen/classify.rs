use serde::{Deserialize, Serialize};

use super::EigenSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    /// Lower polariton.
    LP,
    /// Upper polariton.
    UP,
    /// Symmetric, dipole-dark but emitting state near the molecular resonance.
    X,
    /// Symmetric state near resonance with a weak but nonzero dipole.
    Xb,
    /// Non-symmetric state dark to both photon and dipole absorption that
    /// still leaks photons into vibrationally excited ground states.
    Y,
    BrightOther,
    /// Neither emits nor carries photon weight.
    ReservoirDark,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::LP => "LP",
            Self::UP => "UP",
            Self::X => "X",
            Self::Xb => "Xb",
            Self::Y => "Y",
            Self::BrightOther => "BrightOther",
            Self::ReservoirDark => "ReservoirDark",
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Cutoffs used by [`classify`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thresholds {
    /// Dipole fraction |μ_jG|²/(Nμ²) and photon weight |aG_j|² below which a state is dark.
    pub eps_dark: f64,
    /// Emission strength and photon weight below which a state does not emit.
    pub eps_emit: f64,
    /// Upper dipole fraction for the weakly bright Xb state.
    pub eps_weak: f64,
    /// X and Xb must lie within this distance of ω = 0 (units of ω_v).
    pub resonance_window: f64,
    /// Minimum weight in the symmetric subspace for X and Xb.
    pub symmetric_min: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            eps_dark: 1e-4,
            eps_emit: 1e-6,
            eps_weak: 0.05,
            resonance_window: 0.5,
            symmetric_min: 0.5,
        }
    }
}

/// Labels every eigenstate.
///
/// LP and UP are the dipole-bright states below and above ω = 0 with the
/// largest absorption weight |aG_j|²·F_j. Vibronic labels (X, Xb, Y) are only
/// assigned when the Huang–Rhys factor is nonzero.
pub fn classify(sys: &EigenSystem, t: &Thresholds) -> Vec<Label> {
    let n = sys.len();
    let omega = sys.omega();
    let weight: Vec<f64> = (0..n)
        .map(|j| sys.a_g()[j].powi(2) * sys.f_emission()[j])
        .collect();
    let argmax = |pred: &dyn Fn(f64) -> bool| {
        (0..n)
            .filter(|&j| pred(omega[j]) && weight[j] > 0.0 && sys.mu_fraction(j) >= t.eps_dark)
            .max_by(|&a, &b| weight[a].total_cmp(&weight[b]).then(b.cmp(&a)))
    };
    let lp = argmax(&|w| w < 0.0);
    let up = argmax(&|w| w > 0.0);
    let vibronic = sys.params().huang_rhys > 0.0;

    (0..n)
        .map(|j| {
            if Some(j) == lp {
                return Label::LP;
            }
            if Some(j) == up {
                return Label::UP;
            }
            let mu = sys.mu_fraction(j);
            let a2 = sys.a_g()[j].powi(2);
            let f = sys.f_emission()[j];
            let symmetric = sys.symmetric_weight()[j] > t.symmetric_min;
            let near = omega[j].abs() <= t.resonance_window;
            if vibronic {
                if symmetric && near && mu < t.eps_dark && f > t.eps_emit {
                    return Label::X;
                }
                if symmetric && near && mu >= t.eps_dark && mu < t.eps_weak && a2 > t.eps_dark {
                    return Label::Xb;
                }
                if !symmetric
                    && mu < t.eps_dark
                    && a2 < t.eps_dark
                    && sys.vibrational_photon_weight()[j] > t.eps_emit
                {
                    return Label::Y;
                }
            }
            if f < t.eps_emit && sys.photon_weight()[j] < t.eps_emit {
                Label::ReservoirDark
            } else {
                Label::BrightOther
            }
        })
        .collect()
}
