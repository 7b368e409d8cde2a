//! Model parameters, Franck–Condon overlaps and the truncated bases of the
//! one-excitation and ground manifolds.

mod basis;
mod fc;
mod params;

pub use basis::{
    enumerate_excitation_basis, enumerate_ground_basis, excitation_basis_count, ground_basis_count, Basis,
    BasisState, Manifold, OrbitKey, StateKind, VibConfig,
};
pub use fc::{fc_overlap, fc_tail_cutoff, FcTable};
pub use params::ModelParams;
