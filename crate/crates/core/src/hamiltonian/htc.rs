use std::io::Write;

use super::CsrMatrix;
use crate::error::{HtcError, Result};
use crate::model::{Basis, BasisState, FcTable, Manifold, ModelParams};

/// Real symmetric HTC Hamiltonian on an excitation-manifold basis, in units
/// of ω_v and in the frame rotating at ω_00.
#[derive(Debug, Clone)]
pub struct HtcMatrix {
    matrix: CsrMatrix,
    basis_fingerprint: u64,
}

impl HtcMatrix {
    /// Wraps an arbitrary square matrix; used by tests and alternative builders.
    pub fn from_csr(matrix: CsrMatrix, basis: &Basis) -> Result<Self> {
        if matrix.nrows() != basis.len() || matrix.ncols() != basis.len() {
            return Err(HtcError::BasisMismatch(format!(
                "matrix is {}x{}, basis has {} states",
                matrix.nrows(),
                matrix.ncols(),
                basis.len()
            )));
        }
        Ok(Self {
            matrix,
            basis_fingerprint: basis.fingerprint(),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn basis_fingerprint(&self) -> u64 {
        self.basis_fingerprint
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.matrix.get(row, col)
    }

    /// Writes the matrix as text: a `#` header line with the dimension,
    /// entry count and basis fingerprint, then one `row col value` line per
    /// stored entry (zero-based indices, row-major, values with 17 significant
    /// digits).
    pub fn write_triplets<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(
            w,
            "# dim {} nnz {} basis {:016x}",
            self.dim(),
            self.matrix.nnz(),
            self.basis_fingerprint
        )?;
        for (r, c, v) in self.matrix.triplets() {
            writeln!(w, "{r} {c} {v:.16e}")?;
        }
        Ok(())
    }
}

/// Diagonal and unit-coupling parts of the Hamiltonian: `H = diag + Ω · coupling`.
#[derive(Debug, Clone)]
pub struct HamiltonianParts {
    pub diagonal: Vec<f64>,
    pub coupling: CsrMatrix,
}

pub(crate) fn check_excitation_basis(params: &ModelParams, basis: &Basis) -> Result<()> {
    if basis.manifold() != Manifold::Excitation {
        return Err(HtcError::BasisMismatch(
            "expected an excitation-manifold basis".into(),
        ));
    }
    if basis.n_molecules() != params.n_molecules {
        return Err(HtcError::BasisMismatch(format!(
            "basis built for N = {}, parameters have N = {}",
            basis.n_molecules(),
            params.n_molecules
        )));
    }
    Ok(())
}

fn diagonal_energy(state: &BasisState, detuning: f64) -> f64 {
    state.total_quanta() as f64 - state.photon() as f64 * detuning
}

pub fn hamiltonian_parts(params: &ModelParams, basis: &Basis) -> Result<HamiltonianParts> {
    params.validate()?;
    check_excitation_basis(params, basis)?;
    let vmax = basis
        .states()
        .iter()
        .map(BasisState::max_quanta)
        .max()
        .unwrap_or(0);
    let fc = FcTable::new(params.lambda(), vmax as usize + 1)?;

    let diagonal = basis
        .states()
        .iter()
        .map(|s| diagonal_energy(s, params.detuning))
        .collect();

    let mut trip = Vec::new();
    for (k, state) in basis.iter() {
        let Some((site, nu_tilde, background)) = state.exciton_parts() else {
            continue;
        };
        // Emitting the photon returns `site` to its ground potential with ν quanta.
        for nu in 0..=vmax {
            let photon = BasisState::Photon {
                vib: background.with(site, nu),
            };
            if let Some(p) = basis.position(&photon) {
                let v = 0.5 * fc.get(nu, nu_tilde);
                trip.push((p, k, v));
                trip.push((k, p, v));
            }
        }
    }
    Ok(HamiltonianParts {
        diagonal,
        coupling: CsrMatrix::from_triplets(basis.len(), basis.len(), trip),
    })
}

/// Assembles the Hamiltonian. Photon states sit at (vibrational quanta − Δ),
/// exciton states at their displaced plus spectator quanta, and the
/// light–matter term couples an exciton on molecule n to the photon state
/// with the same background and molecule n in ground level ν with
/// strength (Ω/2)⟨ν|ν̃⟩.
pub fn build_hamiltonian(params: &ModelParams, basis: &Basis) -> Result<HtcMatrix> {
    let parts = hamiltonian_parts(params, basis)?;
    let n = basis.len();
    let diag = CsrMatrix::from_triplets(
        n,
        n,
        parts
            .diagonal
            .iter()
            .enumerate()
            .map(|(k, &d)| (k, k, d))
            .collect(),
    );
    HtcMatrix::from_csr(diag.add_scaled(&parts.coupling, params.rabi_single), basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{enumerate_excitation_basis, VibConfig};
    use approx::assert_abs_diff_eq;

    fn params(n: usize, huang_rhys: f64, nu_max: u32, rabi: f64) -> ModelParams {
        ModelParams {
            n_molecules: n,
            huang_rhys,
            nu_max,
            rabi_single: rabi,
            ..Default::default()
        }
    }

    fn sorted_eigenvalues(m: &CsrMatrix) -> Vec<f64> {
        let d = m.to_dense();
        let mut ev: Vec<f64> = d.self_adjoint_eigenvalues(faer::Side::Lower).unwrap();
        ev.sort_by(f64::total_cmp);
        ev
    }

    #[test]
    fn bare_tavis_cummings_doublet() {
        let p = params(1, 0.0, 0, 0.8);
        let b = enumerate_excitation_basis(&p).unwrap();
        let h = build_hamiltonian(&p, &b).unwrap();
        assert_eq!(h.dim(), 2);
        let d = h.matrix().to_dense();
        assert_eq!(d[(0, 0)], 0.0);
        assert_eq!(d[(1, 1)], 0.0);
        assert_eq!(d[(0, 1)], 0.4);
        assert_eq!(d[(1, 0)], 0.4);
        let ev = sorted_eigenvalues(h.matrix());
        assert_abs_diff_eq!(ev[0], -0.4, epsilon = 1e-14);
        assert_abs_diff_eq!(ev[1], 0.4, epsilon = 1e-14);
    }

    #[test]
    fn franck_condon_weighted_coupling() {
        let p = params(1, 1.0, 2, 1.3);
        let b = enumerate_excitation_basis(&p).unwrap();
        let h = build_hamiltonian(&p, &b).unwrap();
        let photon0 = b
            .position(&BasisState::Photon {
                vib: VibConfig::empty(),
            })
            .unwrap();
        let photon1 = b
            .position(&BasisState::Photon {
                vib: VibConfig::single(0, 1),
            })
            .unwrap();
        let ex1 = b.position(&BasisState::Exciton { site: 0, vib: 1 }).unwrap();
        let ex0 = b.position(&BasisState::Exciton { site: 0, vib: 0 }).unwrap();
        let e = (-0.5f64).exp();
        assert_abs_diff_eq!(h.get(photon0, ex1), 0.65 * e, epsilon = 1e-15);
        assert_abs_diff_eq!(h.get(photon1, ex1), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(h.get(photon1, ex0), -0.65 * e, epsilon = 1e-15);
        assert_eq!(h.get(photon1, photon1), 1.0);
    }

    #[test]
    fn detuning_shifts_photon_states_only() {
        let p = ModelParams {
            detuning: 0.3,
            ..params(2, 1.0, 2, 0.5)
        };
        let b = enumerate_excitation_basis(&p).unwrap();
        let h = build_hamiltonian(&p, &b).unwrap();
        for (k, s) in b.iter() {
            let expected = s.total_quanta() as f64 - if s.photon() == 1 { 0.3 } else { 0.0 };
            assert_eq!(h.get(k, k), expected);
        }
    }

    #[test]
    fn symmetric_with_no_photon_photon_or_exciton_exciton_coupling() {
        let p = params(3, 0.7, 3, 0.9);
        let b = enumerate_excitation_basis(&p).unwrap();
        let h = build_hamiltonian(&p, &b).unwrap();
        assert_eq!(h.matrix().max_asymmetry(), 0.0);
        for (r, c, _) in h.matrix().triplets() {
            if r != c {
                assert_ne!(b.state(r).photon(), b.state(c).photon());
            }
        }
    }

    #[test]
    fn permutation_covariance() {
        let p = params(4, 1.0, 2, 0.6);
        let b = enumerate_excitation_basis(&p).unwrap();
        let h = build_hamiltonian(&p, &b).unwrap();
        let perm = [2u32, 0, 3, 1];
        let map: Vec<usize> = b
            .states()
            .iter()
            .map(|s| b.position(&s.permuted(&perm)).unwrap())
            .collect();
        for (r, c, v) in h.matrix().triplets() {
            assert_eq!(h.get(map[r], map[c]), v);
        }
        let permuted = CsrMatrix::from_triplets(
            h.dim(),
            h.dim(),
            h.matrix()
                .triplets()
                .map(|(r, c, v)| (map[r], map[c], v))
                .collect(),
        );
        for (a, z) in sorted_eigenvalues(h.matrix())
            .iter()
            .zip(sorted_eigenvalues(&permuted))
        {
            assert_abs_diff_eq!(*a, z, epsilon = 1e-12);
        }
    }

    #[test]
    fn triplet_dump_round_trips() {
        let p = params(2, 1.0, 1, 0.5);
        let b = enumerate_excitation_basis(&p).unwrap();
        let h = build_hamiltonian(&p, &b).unwrap();
        let mut out = Vec::new();
        h.write_triplets(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# dim 11 "));
        let trip: Vec<(usize, usize, f64)> = lines
            .map(|l| {
                let f: Vec<&str> = l.split_whitespace().collect();
                (
                    f[0].parse().unwrap(),
                    f[1].parse().unwrap(),
                    f[2].parse().unwrap(),
                )
            })
            .collect();
        assert_eq!(&CsrMatrix::from_triplets(11, 11, trip), h.matrix());
    }

    #[test]
    fn rejects_ground_basis() {
        let p = params(2, 1.0, 1, 0.5);
        let g = crate::model::enumerate_ground_basis(&p).unwrap();
        assert!(matches!(
            build_hamiltonian(&p, &g),
            Err(HtcError::BasisMismatch(_))
        ));
    }
}
