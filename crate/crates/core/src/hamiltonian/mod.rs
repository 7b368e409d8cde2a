//! The HTC Hamiltonian on the excitation manifold and the jump operators
//! into the ground manifold.

mod htc;
mod jump;
mod sparse;

pub use htc::{build_hamiltonian, hamiltonian_parts, HamiltonianParts, HtcMatrix};
pub use jump::{build_jump_matrices, JumpMatrices, DECAY_TAIL_TOL};
pub use sparse::CsrMatrix;
