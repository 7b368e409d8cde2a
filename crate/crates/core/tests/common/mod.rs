#![allow(dead_code)]

pub mod oracle;

use htc_core::ModelParams;

/// λ² = 1 ensemble with the given size, coupling given as √N·Ω.
pub fn ensemble(n: usize, collective_rabi: f64) -> ModelParams {
    ModelParams {
        n_molecules: n,
        ..Default::default()
    }
    .with_collective_rabi(collective_rabi)
}

/// Poisson weight beyond `nu_max` for Huang–Rhys factor `s`.
pub fn poisson_tail(s: f64, nu_max: u32) -> f64 {
    let mut term = (-s).exp();
    let mut kept = term;
    for k in 1..=nu_max {
        term *= s / k as f64;
        kept += term;
    }
    1.0 - kept
}
