use faer::Mat;
use rayon::prelude::*;

use super::{classify, diagonalize_with, symmetric_sector, Eigenpairs, Label, Solver, Thresholds};
use crate::error::{HtcError, Result};
use crate::hamiltonian::{build_hamiltonian, build_jump_matrices, JumpMatrices};
use crate::model::{enumerate_excitation_basis, enumerate_ground_basis, Basis, BasisState, ModelParams};

/// Eigenvalues closer than this (units of ω_v) are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Eigenpairs together with the matrix elements and rates derived from them.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    params: ModelParams,
    omega: Vec<f64>,
    vectors: Mat<f64>,
    a_elements: Mat<f64>,
    jminus_elements: Mat<f64>,
    mu_g: Vec<f64>,
    a_g: Vec<f64>,
    gamma: Vec<f64>,
    f_emission: Vec<f64>,
    photon_weight: Vec<f64>,
    vibrational_photon_weight: Vec<f64>,
    symmetric_weight: Vec<f64>,
    degeneracy: Vec<usize>,
    cluster: Vec<usize>,
    ground_quanta: Vec<u32>,
    labels: Vec<Label>,
}

struct ColumnObservables {
    a: Vec<f64>,
    jminus: Vec<f64>,
    decay_norm2: f64,
    photon: f64,
    vibrational_photon: f64,
    symmetric: f64,
}

/// Fills in matrix elements, rates, degeneracies and default labels.
///
/// Γ_j and F_j sum over the complete ground manifold reached by `Ĵ₋`, not
/// just the states kept in `ground`, so they do not depend on
/// `nu_max_ground`. Since `â` maps distinct photon states to distinct ground
/// configurations, its contribution to Γ_j is the photon weight of state j.
pub fn derive_observables(
    eig: Eigenpairs,
    excitation: &Basis,
    ground: &Basis,
    jumps: &JumpMatrices,
    params: &ModelParams,
) -> Result<EigenSystem> {
    if eig.basis_fingerprint() != excitation.fingerprint()
        || jumps.excitation_fingerprint() != excitation.fingerprint()
        || jumps.ground_fingerprint() != ground.fingerprint()
    {
        return Err(HtcError::BasisMismatch(
            "eigenpairs, jump matrices and bases do not belong together".into(),
        ));
    }
    let dim = eig.dim();
    let ng = ground.len();
    let photon_rows: Vec<(usize, u32)> = excitation
        .iter()
        .filter(|(_, s)| s.photon() == 1)
        .map(|(k, s)| (k, s.total_quanta()))
        .collect();
    let orbits: Vec<Vec<usize>> = symmetric_sector(excitation)
        .into_iter()
        .map(|(_, v)| v.into_iter().map(|(k, _)| k).collect())
        .collect();

    let vectors = eig.vectors();
    let columns: Vec<ColumnObservables> = (0..dim)
        .into_par_iter()
        .map(|j| {
            let col = vectors.col(j);
            let v: Vec<f64> = (0..dim).map(|k| col[k]).collect();
            let decay_norm2 = jumps.jminus_complete.mul_vec(&v).iter().map(|x| x * x).sum();
            let photon = photon_rows.iter().map(|&(k, _)| v[k] * v[k]).sum();
            let vibrational_photon = photon_rows
                .iter()
                .filter(|&&(_, q)| q > 0)
                .map(|&(k, _)| v[k] * v[k])
                .sum();
            let symmetric = orbits
                .iter()
                .map(|o| o.iter().map(|&k| v[k]).sum::<f64>().powi(2) / o.len() as f64)
                .sum();
            ColumnObservables {
                a: jumps.a_matrix.mul_vec(&v),
                jminus: jumps.jminus_matrix.mul_vec(&v),
                decay_norm2,
                photon,
                vibrational_photon,
                symmetric,
            }
        })
        .collect();

    let n = params.n_molecules as f64;
    let a_elements = Mat::from_fn(ng, dim, |i, j| columns[j].a[i]);
    let jminus_elements = Mat::from_fn(ng, dim, |i, j| columns[j].jminus[i]);
    let a_g = (0..dim).map(|j| a_elements[(0, j)]).collect();
    let mu_g = (0..dim)
        .map(|j| n.sqrt() * jminus_elements[(0, j)] * params.dipole_unit)
        .collect();
    let gamma = columns
        .iter()
        .map(|c| params.kappa * c.photon + params.gamma_e_collective * c.decay_norm2)
        .collect();
    let f_emission = columns.iter().map(|c| n * c.decay_norm2).collect();

    let omega = eig.omega().to_vec();
    let (cluster, degeneracy) = cluster_levels(&omega, DEGENERACY_TOL);
    let ground_quanta = ground.states().iter().map(BasisState::total_quanta).collect();

    let mut sys = EigenSystem {
        params: params.clone(),
        omega,
        vectors: eig.vectors,
        a_elements,
        jminus_elements,
        mu_g,
        a_g,
        gamma,
        f_emission,
        photon_weight: columns.iter().map(|c| c.photon).collect(),
        vibrational_photon_weight: columns.iter().map(|c| c.vibrational_photon).collect(),
        symmetric_weight: columns.iter().map(|c| c.symmetric).collect(),
        degeneracy,
        cluster,
        ground_quanta,
        labels: Vec::new(),
    };
    sys.labels = classify(&sys, &Thresholds::default());
    Ok(sys)
}

fn cluster_levels(omega: &[f64], tol: f64) -> (Vec<usize>, Vec<usize>) {
    let mut cluster = Vec::with_capacity(omega.len());
    let mut id = 0;
    for j in 0..omega.len() {
        if j > 0 && omega[j] - omega[j - 1] > tol {
            id += 1;
        }
        cluster.push(id);
    }
    let mut sizes = vec![0usize; id + 1];
    for &c in &cluster {
        sizes[c] += 1;
    }
    let degeneracy = cluster.iter().map(|&c| sizes[c]).collect();
    (cluster, degeneracy)
}

/// Enumerates both bases, builds and diagonalizes the Hamiltonian, and
/// derives all observables.
pub fn solve(params: &ModelParams, solver: Solver) -> Result<EigenSystem> {
    let excitation = enumerate_excitation_basis(params)?;
    let ground = enumerate_ground_basis(params)?;
    let h = build_hamiltonian(params, &excitation)?;
    let jumps = build_jump_matrices(params, &excitation, &ground)?;
    let eig = diagonalize_with(&h, &excitation, solver)?;
    derive_observables(eig, &excitation, &ground, &jumps, params)
}

impl EigenSystem {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Number of eigenstates.
    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// Eigenvalues ω_j in units of ω_v, ascending.
    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    /// Eigenvectors in the excitation basis, one per column.
    pub fn vectors(&self) -> &Mat<f64> {
        &self.vectors
    }

    /// `⟨ε_i|â|ε_j⟩`, ground states by row.
    pub fn a_elements(&self) -> &Mat<f64> {
        &self.a_elements
    }

    /// `⟨ε_i|Ĵ₋|ε_j⟩`, ground states by row.
    pub fn jminus_elements(&self) -> &Mat<f64> {
        &self.jminus_elements
    }

    /// Transition dipoles `⟨G|μ̂|ε_j⟩ = √N⟨G|Ĵ₋|ε_j⟩ μ`.
    pub fn mu_g(&self) -> &[f64] {
        &self.mu_g
    }

    /// Photon amplitudes `⟨G|â|ε_j⟩`.
    pub fn a_g(&self) -> &[f64] {
        &self.a_g
    }

    /// Decay rates Γ_j.
    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    /// Total dipole emission strengths F_j.
    pub fn f_emission(&self) -> &[f64] {
        &self.f_emission
    }

    /// Weight of each eigenstate on photon states.
    pub fn photon_weight(&self) -> &[f64] {
        &self.photon_weight
    }

    /// Weight on photon states whose material background carries vibrational quanta.
    pub fn vibrational_photon_weight(&self) -> &[f64] {
        &self.vibrational_photon_weight
    }

    /// Weight in the permutation-symmetric subspace.
    pub fn symmetric_weight(&self) -> &[f64] {
        &self.symmetric_weight
    }

    pub fn degeneracy(&self) -> &[usize] {
        &self.degeneracy
    }

    /// Index of the degenerate cluster each state belongs to.
    pub fn cluster(&self) -> &[usize] {
        &self.cluster
    }

    /// Total vibrational quanta ν_i of each ground-basis state.
    pub fn ground_quanta(&self) -> &[u32] {
        &self.ground_quanta
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// `|μ_jG|² / (N μ²)`.
    pub fn mu_fraction(&self, j: usize) -> f64 {
        self.mu_g[j].powi(2) / (self.params.n_molecules as f64 * self.params.dipole_unit.powi(2))
    }

    /// Reclassifies with different thresholds.
    pub fn relabel(&mut self, thresholds: &Thresholds) {
        self.labels = classify(self, thresholds);
    }

    /// First state carrying `label`.
    pub fn find(&self, label: Label) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn states_with(&self, label: Label) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.labels[j] == label).collect()
    }
}
