//! Franck–Condon overlaps between undisplaced and displaced oscillator states.
//!
//! Convention: the excited-state potential of a molecule is the ground-state
//! potential shifted to `b = -λ`, so its eigenstates are `|ν̃⟩ = D(-λ)|ν⟩`
//! with `D(α) = exp(α b† − α* b)`. The overlap is then
//! `⟨ν|ν̃'⟩ = ⟨ν|D(-λ)|ν'⟩`, which gives `⟨0|ν̃⟩ = e^{-λ²/2} λ^ν / √ν! > 0`
//! for every ν and `⟨ν|0̃⟩ = e^{-λ²/2} (-λ)^ν / √ν!`.

use crate::error::{HtcError, Result};

/// Dense table of `⟨ν|ν̃'⟩` for `ν, ν̃' < size`.
#[derive(Debug, Clone)]
pub struct FcTable {
    lambda: f64,
    size: usize,
    data: Vec<f64>,
}

impl FcTable {
    pub fn new(lambda: f64, size: usize) -> Result<Self> {
        check_lambda(lambda)?;
        let size = size.max(1);
        let mut data = vec![0.0; size * size];
        // Row ν = 0 in closed form, then √m M[m][n] = √n M[m-1][n-1] − λ M[m-1][n],
        // which follows from D(α)† b D(α) = b + α.
        data[0] = (-0.5 * lambda * lambda).exp();
        for n in 1..size {
            data[n] = data[n - 1] * lambda / (n as f64).sqrt();
        }
        for m in 1..size {
            let inv = 1.0 / (m as f64).sqrt();
            for n in 0..size {
                let diag = if n > 0 {
                    (n as f64).sqrt() * data[(m - 1) * size + n - 1]
                } else {
                    0.0
                };
                data[m * size + n] = (diag - lambda * data[(m - 1) * size + n]) * inv;
            }
        }
        Ok(Self { lambda, size, data })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `⟨nu|nu_tilde⟩`. Panics when either index is outside the table.
    #[inline]
    pub fn get(&self, nu: u32, nu_tilde: u32) -> f64 {
        let (m, n) = (nu as usize, nu_tilde as usize);
        assert!(m < self.size && n < self.size, "FC index out of table range");
        self.data[m * self.size + n]
    }
}

/// Overlap `⟨ν|ν̃⟩` of the undisplaced eigenstate ν with the displaced
/// eigenstate ν̃, for displacement `lambda = √(Huang–Rhys)`.
///
/// Quantum numbers are unsigned, so negative values cannot be expressed.
pub fn fc_overlap(nu: u32, nu_tilde: u32, lambda: f64) -> Result<f64> {
    let size = nu.max(nu_tilde) as usize + 1;
    Ok(FcTable::new(lambda, size)?.get(nu, nu_tilde))
}

/// Smallest `L` such that `Σ_{ν > L} ⟨ν|ν̃⟩² < tol` for every `ν̃ ≤ nu_tilde_max`.
pub fn fc_tail_cutoff(lambda: f64, nu_tilde_max: u32, tol: f64) -> Result<u32> {
    check_lambda(lambda)?;
    let horizon = nu_tilde_max as usize + (lambda * lambda + 12.0 * lambda).ceil() as usize + 48;
    let table = FcTable::new(lambda, horizon + 1)?;
    let mut cutoff = 0u32;
    for nt in 0..=nu_tilde_max {
        let mut tail = 0.0;
        let mut l = horizon as u32;
        // Walk down from the horizon until the accumulated tail would exceed tol.
        while l > 0 {
            let next = tail + table.get(l, nt).powi(2);
            if next >= tol {
                break;
            }
            tail = next;
            l -= 1;
        }
        cutoff = cutoff.max(l);
    }
    Ok(cutoff)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(HtcError::InvalidArgument(format!(
            "displacement must be finite and non-negative, got {lambda}"
        )));
    }
    Ok(())
}
