//! Eigendecomposition of the HTC Hamiltonian, per-state observables,
//! classification of dark vibronic polaritons and critical couplings.

mod classify;
mod critical;
mod dense;
mod symmetry;
mod system;

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{HtcError, Result};
use crate::hamiltonian::HtcMatrix;
use crate::model::Basis;

pub use classify::{classify, Label, Thresholds};
pub use critical::{find_critical_coupling, CriticalCoupling, CriticalOptions};
pub use dense::diagonalize;
pub use symmetry::{symmetric_sector, SparseVector};
pub use system::{derive_observables, solve, EigenSystem, DEGENERACY_TOL};

/// Largest dimension the automatic solver choice hands to the dense solver.
pub const AUTO_DENSE_LIMIT: usize = 3000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    /// Dense below [`AUTO_DENSE_LIMIT`] states, symmetry-adapted above.
    #[default]
    Auto,
    Dense,
    /// Block-diagonalizes by molecule-permutation symmetry first.
    SymmetryAdapted,
}

impl std::str::FromStr for Solver {
    type Err = HtcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Self::Auto),
            "dense" => Ok(Self::Dense),
            "symmetry-adapted" | "symmetry" => Ok(Self::SymmetryAdapted),
            other => Err(HtcError::InvalidArgument(format!(
                "unknown solver `{other}` (expected auto, dense or symmetry-adapted)"
            ))),
        }
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors, one per column.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    omega: Vec<f64>,
    vectors: Mat<f64>,
    basis_fingerprint: u64,
}

impl Eigenpairs {
    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn vectors(&self) -> &Mat<f64> {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    pub fn basis_fingerprint(&self) -> u64 {
        self.basis_fingerprint
    }

    /// Largest `‖H v_j − ω_j v_j‖` over all pairs.
    pub fn max_residual(&self, h: &HtcMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.dim() {
            let v = self.vectors.col(j);
            let x: Vec<f64> = (0..self.dim()).map(|k| v[k]).collect();
            let hv = h.matrix().mul_vec(&x);
            let r: f64 = hv
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - self.omega[j] * b).powi(2))
                .sum();
            worst = worst.max(r.sqrt());
        }
        worst
    }
}

/// Diagonalizes with the requested strategy.
pub fn diagonalize_with(h: &HtcMatrix, basis: &Basis, solver: Solver) -> Result<Eigenpairs> {
    if h.basis_fingerprint() != basis.fingerprint() {
        return Err(HtcError::BasisMismatch(
            "Hamiltonian was built on a different basis".into(),
        ));
    }
    let symmetry_ok = symmetry::supported(basis);
    match solver {
        Solver::Dense => diagonalize(h),
        Solver::SymmetryAdapted if !symmetry_ok => Err(HtcError::InvalidArgument(
            "symmetry-adapted solver does not support photon states dressed by two molecules".into(),
        )),
        Solver::SymmetryAdapted => symmetry::diagonalize_symmetric(h, basis),
        Solver::Auto if h.dim() <= AUTO_DENSE_LIMIT || !symmetry_ok => diagonalize(h),
        Solver::Auto => symmetry::diagonalize_symmetric(h, basis),
    }
}

/// Sorts ascending (stable) and flips each vector so its largest-magnitude
/// component is positive.
fn finalize(mut pairs: Vec<(f64, Vec<(usize, f64)>)>, dim: usize, basis_fingerprint: u64) -> Eigenpairs {
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut vectors = Mat::zeros(dim, pairs.len());
    let mut omega = Vec::with_capacity(pairs.len());
    for (j, (w, v)) in pairs.into_iter().enumerate() {
        let sign = sign_of_largest(v.iter().map(|&(_, x)| x));
        let mut col = vectors.col_mut(j);
        for (k, x) in v {
            col[k] = sign * x;
        }
        omega.push(w);
    }
    Eigenpairs {
        omega,
        vectors,
        basis_fingerprint,
    }
}

fn sign_of_largest(values: impl Iterator<Item = f64>) -> f64 {
    let mut best = 0.0f64;
    for x in values {
        if x.abs() > best.abs() * (1.0 + 1e-12) {
            best = x;
        }
    }
    if best < 0.0 {
        -1.0
    } else {
        1.0
    }
}
