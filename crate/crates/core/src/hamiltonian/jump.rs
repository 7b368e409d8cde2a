use std::collections::HashMap;

use super::htc::check_excitation_basis;
use super::CsrMatrix;
use crate::error::{HtcError, Result};
use crate::model::{fc_tail_cutoff, Basis, BasisState, FcTable, Manifold, ModelParams, VibConfig};

/// Tail weight below which the untruncated decay image is cut off.
pub const DECAY_TAIL_TOL: f64 = 1e-14;

/// Matrix elements of the photon annihilator `â` and of
/// `Ĵ₋ = N^{-1/2} Σ_n |g_n⟩⟨e_n|` between the excitation and ground manifolds.
#[derive(Debug, Clone)]
pub struct JumpMatrices {
    /// `⟨ground_i|â|excitation_k⟩`, rows over the ground basis.
    pub a_matrix: CsrMatrix,
    /// `⟨ground_i|Ĵ₋|excitation_k⟩`, rows over the ground basis.
    pub jminus_matrix: CsrMatrix,
    /// `Ĵ₋` onto every ground configuration it can reach, with each molecule's
    /// final level cut only where the remaining Franck–Condon weight is below
    /// [`DECAY_TAIL_TOL`]. Used for total decay rates and emission strengths,
    /// which sum over the complete ground manifold.
    pub jminus_complete: CsrMatrix,
    excitation_fingerprint: u64,
    ground_fingerprint: u64,
}

impl JumpMatrices {
    pub fn excitation_fingerprint(&self) -> u64 {
        self.excitation_fingerprint
    }

    pub fn ground_fingerprint(&self) -> u64 {
        self.ground_fingerprint
    }
}

pub fn build_jump_matrices(params: &ModelParams, excitation: &Basis, ground: &Basis) -> Result<JumpMatrices> {
    params.validate()?;
    check_excitation_basis(params, excitation)?;
    if ground.manifold() != Manifold::Ground || ground.n_molecules() != params.n_molecules {
        return Err(HtcError::BasisMismatch(
            "expected a ground-manifold basis with the same number of molecules".into(),
        ));
    }
    let lambda = params.lambda();
    let vmax = excitation
        .states()
        .iter()
        .map(BasisState::max_quanta)
        .max()
        .unwrap_or(0);
    let gmax = ground
        .states()
        .iter()
        .map(BasisState::max_quanta)
        .max()
        .unwrap_or(0);
    let cutoff = fc_tail_cutoff(lambda, vmax, DECAY_TAIL_TOL)?.max(gmax);
    let fc = FcTable::new(lambda, cutoff.max(vmax) as usize + 1)?;
    let norm = 1.0 / (params.n_molecules as f64).sqrt();

    let mut a_trip = Vec::new();
    let mut j_trip = Vec::new();
    let mut full_trip = Vec::new();
    let mut targets: HashMap<VibConfig, usize> = HashMap::new();
    for (k, state) in excitation.iter() {
        match state {
            BasisState::Photon { vib } => {
                if let Some(i) = ground.position(&BasisState::Ground { vib: vib.clone() }) {
                    a_trip.push((i, k, 1.0));
                }
            }
            _ => {
                let Some((site, nu_tilde, background)) = state.exciton_parts() else {
                    continue;
                };
                for nu in 0..=cutoff {
                    let value = norm * fc.get(nu, nu_tilde);
                    let vib = background.with(site, nu);
                    if let Some(i) = ground.position(&BasisState::Ground { vib: vib.clone() }) {
                        j_trip.push((i, k, value));
                    }
                    let next = targets.len();
                    let row = *targets.entry(vib).or_insert(next);
                    full_trip.push((row, k, value));
                }
            }
        }
    }
    let (ng, ne) = (ground.len(), excitation.len());
    Ok(JumpMatrices {
        a_matrix: CsrMatrix::from_triplets(ng, ne, a_trip),
        jminus_matrix: CsrMatrix::from_triplets(ng, ne, j_trip),
        jminus_complete: CsrMatrix::from_triplets(targets.len(), ne, full_trip),
        excitation_fingerprint: excitation.fingerprint(),
        ground_fingerprint: ground.fingerprint(),
    })
}
