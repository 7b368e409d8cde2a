//! Exact diagonalization of the Holstein–Tavis–Cummings model and the
//! optical spectra derived from its eigenstates.
//!
//! All frequencies and rates are in units of the vibrational frequency ω_v
//! and measured from the 0-0 transition.

pub mod eigen;
pub mod error;
pub mod hamiltonian;
pub mod io;
pub mod model;
pub mod spectra;

pub use eigen::{
    classify, derive_observables, diagonalize, diagonalize_with, find_critical_coupling, solve,
    CriticalCoupling, CriticalOptions, EigenSystem, Eigenpairs, Label, Solver, Thresholds,
};
pub use error::{HtcError, Result};
pub use hamiltonian::{build_hamiltonian, build_jump_matrices, CsrMatrix, HtcMatrix, JumpMatrices};
pub use model::{
    enumerate_excitation_basis, enumerate_ground_basis, fc_overlap, Basis, BasisState, FcTable, Manifold,
    ModelParams, StateKind, VibConfig,
};
pub use spectra::{
    absorption_spectrum, bound_absorption, ilp_curve, lineshape, lp_blueshift, lpl_spectrum, BlueShift, Grid,
    LineOptions, Operator, PopulationModel, SpectralSeries, Stick,
};
