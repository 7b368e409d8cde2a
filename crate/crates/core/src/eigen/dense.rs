use faer::Side;

use super::{finalize, Eigenpairs};
use crate::error::{HtcError, Result};
use crate::hamiltonian::HtcMatrix;

/// Full dense symmetric eigendecomposition.
pub fn diagonalize(h: &HtcMatrix) -> Result<Eigenpairs> {
    let m = h.matrix();
    let n = h.dim();
    let failure = |reason: String| HtcError::EigenFailure {
        dim: n,
        max_abs: m.max_abs(),
        asymmetry: m.max_asymmetry(),
        reason,
    };
    if m.triplets().any(|(_, _, v)| !v.is_finite()) {
        return Err(failure("matrix has non-finite entries".into()));
    }
    if m.max_asymmetry() > 1e-12 * m.max_abs().max(1.0) {
        return Err(failure("matrix is not symmetric".into()));
    }
    let evd = m
        .to_dense()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| failure(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let pairs = (0..n)
        .map(|j| {
            let col = u.col(j);
            (s[j], (0..n).map(|k| (k, col[k])).collect())
        })
        .collect();
    let out = finalize(pairs, n, h.basis_fingerprint());
    if out.omega.iter().any(|w| !w.is_finite()) {
        return Err(failure("non-finite eigenvalues".into()));
    }
    Ok(out)
}
