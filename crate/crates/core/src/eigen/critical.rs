use faer::{Mat, Side};
use serde::Serialize;

use super::symmetry::{project, symmetric_sector, SparseVector};
use crate::error::{HtcError, Result};
use crate::hamiltonian::{build_jump_matrices, hamiltonian_parts, CsrMatrix};
use crate::model::{enumerate_excitation_basis, enumerate_ground_basis, ModelParams};

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalOptions {
    /// Stop once the tracked eigenvalue is within this of zero (units of ω_v).
    pub tol: f64,
    /// Minimum eigenvector overlap accepted between consecutive steps.
    pub min_overlap: f64,
    /// Uniform steps used to scan the bracket for a sign change.
    pub scan_steps: usize,
    /// How many times a step may be halved to restore overlap.
    pub max_refinements: u32,
    pub max_bisections: usize,
}

impl Default for CriticalOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            min_overlap: 0.7,
            scan_steps: 64,
            max_refinements: 16,
            max_bisections: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalCoupling {
    /// Ω_c / ω_v.
    pub rabi_single: f64,
    /// √N Ω_c / ω_v.
    pub collective_rabi: f64,
    /// Tracked eigenvalue at `rabi_single`.
    pub omega: f64,
    /// |μ_XG|²/(Nμ²) of the tracked state.
    pub mu_fraction: f64,
    /// Tracked eigenvalue at the lower bracket end.
    pub omega_start: f64,
    pub bisections: usize,
}

struct SymmetricSector {
    diagonal: Mat<f64>,
    coupling: Mat<f64>,
}

impl SymmetricSector {
    fn eigen(&self, rabi: f64) -> Result<(Vec<f64>, Mat<f64>)> {
        let h = &self.diagonal + &self.coupling * faer::Scale(rabi);
        let evd = h
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| HtcError::EigenFailure {
                dim: h.nrows(),
                max_abs: f64::NAN,
                asymmetry: 0.0,
                reason: format!("{e:?}"),
            })?;
        let s = evd.S().column_vector();
        Ok(((0..h.nrows()).map(|k| s[k]).collect(), evd.U().to_owned()))
    }
}

#[derive(Clone)]
struct Tracked {
    rabi: f64,
    omega: f64,
    vector: Vec<f64>,
}

/// Finds the single-molecule coupling Ω at which the symmetric-sector
/// eigenvalue nearest zero at `bracket.0` crosses ω = 0.
///
/// The branch is followed by eigenvector overlap, halving steps where the
/// overlap drops below `min_overlap`, then refined by bisection.
/// `params.rabi_single` is ignored.
pub fn find_critical_coupling(
    params: &ModelParams,
    bracket: (f64, f64),
    opts: &CriticalOptions,
) -> Result<CriticalCoupling> {
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo < hi) {
        return Err(HtcError::InvalidArgument(format!(
            "critical-coupling bracket must satisfy 0 <= lo < hi, got [{lo}, {hi}]"
        )));
    }
    if opts.scan_steps == 0 || !(opts.tol > 0.0) {
        return Err(HtcError::InvalidArgument(
            "scan_steps and tol must be positive".into(),
        ));
    }
    let params = params.with_rabi(lo);
    let basis = enumerate_excitation_basis(&params)?;
    let parts = hamiltonian_parts(&params, &basis)?;
    let sym: Vec<SparseVector> = symmetric_sector(&basis).into_iter().map(|(_, v)| v).collect();
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
    let sector = SymmetricSector {
        diagonal: project(&diag, &sym),
        coupling: project(&parts.coupling, &sym),
    };

    let (w, u) = sector.eigen(lo)?;
    let start = (0..w.len())
        .min_by(|&a, &b| w[a].abs().total_cmp(&w[b].abs()))
        .unwrap();
    let first = Tracked {
        rabi: lo,
        omega: w[start],
        vector: (0..w.len()).map(|i| u[(i, start)]).collect(),
    };

    let step = (hi - lo) / opts.scan_steps as f64;
    let mut cur = first.clone();
    let mut crossing = None;
    for s in 1..=opts.scan_steps {
        if cur.omega == 0.0 {
            crossing = Some((cur.clone(), cur.clone()));
            break;
        }
        let target = if s == opts.scan_steps {
            hi
        } else {
            lo + step * s as f64
        };
        let next = advance(&sector, &cur, target, opts, 0)?;
        if next.omega == 0.0 || next.omega.signum() != cur.omega.signum() {
            crossing = Some((cur.clone(), next));
            break;
        }
        cur = next;
    }
    let Some((mut a, mut b)) = crossing else {
        return Err(HtcError::NoSignChange {
            lo,
            hi,
            start: first.omega,
            end: cur.omega,
        });
    };

    let mut best = if a.omega.abs() <= b.omega.abs() {
        a.clone()
    } else {
        b.clone()
    };
    let mut bisections = 0;
    while best.omega.abs() >= opts.tol && bisections < opts.max_bisections && b.rabi - a.rabi > 0.0 {
        let mid = 0.5 * (a.rabi + b.rabi);
        if mid <= a.rabi || mid >= b.rabi {
            break;
        }
        let m = advance(&sector, &a, mid, opts, 0)?;
        bisections += 1;
        if m.omega.abs() < best.omega.abs() {
            best = m.clone();
        }
        if m.omega.signum() == a.omega.signum() {
            a = m;
        } else {
            b = m;
        }
    }

    let full: SparseVector = {
        let mut acc = vec![0.0; n];
        for (i, v) in sym.iter().enumerate() {
            for &(k, x) in v {
                acc[k] += best.vector[i] * x;
            }
        }
        acc.into_iter().enumerate().filter(|&(_, x)| x != 0.0).collect()
    };
    let ground_params = ModelParams {
        nu_max_ground: 0,
        ..params.clone()
    };
    let ground = enumerate_ground_basis(&ground_params)?;
    let jumps = build_jump_matrices(&ground_params, &basis, &ground)?;
    let amplitude: f64 = full.iter().map(|&(k, x)| jumps.jminus_matrix.get(0, k) * x).sum();

    Ok(CriticalCoupling {
        rabi_single: best.rabi,
        collective_rabi: best.rabi * (params.n_molecules as f64).sqrt(),
        omega: best.omega,
        mu_fraction: amplitude * amplitude,
        omega_start: first.omega,
        bisections,
    })
}

/// Moves the tracked state from `from.rabi` to `target`.
fn advance(
    sector: &SymmetricSector,
    from: &Tracked,
    target: f64,
    opts: &CriticalOptions,
    depth: u32,
) -> Result<Tracked> {
    let (w, u) = sector.eigen(target)?;
    let m = w.len();
    let overlaps: Vec<f64> = (0..m)
        .map(|c| (0..m).map(|i| u[(i, c)] * from.vector[i]).sum::<f64>().abs())
        .collect();
    let best = (0..m)
        .max_by(|&a, &b| overlaps[a].total_cmp(&overlaps[b]))
        .unwrap();
    if overlaps[best] >= opts.min_overlap {
        let mut vector: Vec<f64> = (0..m).map(|i| u[(i, best)]).collect();
        let dot: f64 = vector.iter().zip(&from.vector).map(|(a, b)| a * b).sum();
        if dot < 0.0 {
            vector.iter_mut().for_each(|x| *x = -*x);
        }
        return Ok(Tracked {
            rabi: target,
            omega: w[best],
            vector,
        });
    }
    if depth >= opts.max_refinements {
        return Err(HtcError::TrackingAmbiguous {
            rabi: target,
            overlap: overlaps[best],
            min_overlap: opts.min_overlap,
        });
    }
    let mid = advance(sector, from, 0.5 * (from.rabi + target), opts, depth + 1)?;
    advance(sector, &mid, target, opts, depth + 1)
}
