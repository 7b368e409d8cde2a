//! Block diagonalization by permutation symmetry of the molecules.
//!
//! The excitation space splits into the totally symmetric sector (normalized
//! orbit sums), N−1 identical copies of a sector built from Helmert
//! contrasts c_β (Σ_m c_βm = 0) placed on each molecule role of a state, and
//! a remainder inside each exciton-pair orbit that no photon state reaches.

use std::collections::{BTreeMap, HashMap};

use faer::{Mat, Side};

use super::{finalize, Eigenpairs};
use crate::error::{HtcError, Result};
use crate::hamiltonian::{CsrMatrix, HtcMatrix};
use crate::model::{Basis, BasisState, OrbitKey};

/// `(basis index, amplitude)` pairs.
pub type SparseVector = Vec<(usize, f64)>;

pub(crate) fn supported(basis: &Basis) -> bool {
    basis
        .states()
        .iter()
        .all(|s| !matches!(s, BasisState::Photon { vib } if vib.excited_sites() > 1))
}

/// Molecules that play a distinguished role in `state`, in a fixed order.
fn roles(state: &BasisState) -> Vec<u32> {
    match state {
        BasisState::Ground { vib } | BasisState::Photon { vib } => vib.iter().map(|(s, _)| s).collect(),
        BasisState::Exciton { site, .. } => vec![*site],
        BasisState::ExcitonPair { site, spectator, .. } => vec![*site, *spectator],
    }
}

fn orbits(basis: &Basis) -> BTreeMap<OrbitKey, Vec<usize>> {
    let mut map: BTreeMap<OrbitKey, Vec<usize>> = BTreeMap::new();
    for (k, s) in basis.iter() {
        map.entry(s.orbit_key()).or_default().push(k);
    }
    map
}

/// Normalized orbit sums spanning the permutation-symmetric subspace.
pub fn symmetric_sector(basis: &Basis) -> Vec<(OrbitKey, SparseVector)> {
    orbits(basis)
        .into_iter()
        .map(|(key, idx)| {
            let a = 1.0 / (idx.len() as f64).sqrt();
            (key, idx.into_iter().map(|k| (k, a)).collect())
        })
        .collect()
}

/// Orthonormal contrasts over `n` molecules; row β−1 is nonzero on molecules 0..=β.
fn helmert(n: usize) -> Vec<Vec<f64>> {
    (1..n)
        .map(|b| {
            let norm = 1.0 / ((b * (b + 1)) as f64).sqrt();
            (0..n)
                .map(|m| match m.cmp(&b) {
                    std::cmp::Ordering::Less => norm,
                    std::cmp::Ordering::Equal => -(b as f64) * norm,
                    std::cmp::Ordering::Greater => 0.0,
                })
                .collect()
        })
        .collect()
}

fn sparse_dot(a: &SparseVector, b: &SparseVector) -> f64 {
    let lookup: HashMap<usize, f64> = a.iter().copied().collect();
    b.iter().map(|(k, x)| lookup.get(k).map_or(0.0, |y| x * y)).sum()
}

fn combine(parts: &[SparseVector], coeffs: &[(usize, f64)]) -> SparseVector {
    let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
    for &(t, c) in coeffs {
        for &(k, x) in &parts[t] {
            *acc.entry(k).or_insert(0.0) += c * x;
        }
    }
    acc.into_iter().filter(|&(_, x)| x != 0.0).collect()
}

/// Dense `Vᵀ H V` for sparse columns `V`.
pub(crate) fn project(h: &CsrMatrix, vectors: &[SparseVector]) -> Mat<f64> {
    let m = vectors.len();
    let mut acc = vec![0.0; h.nrows()];
    let mut out = Mat::zeros(m, m);
    for j in 0..m {
        let mut touched = Vec::new();
        for &(c, x) in &vectors[j] {
            // H is symmetric, so column c equals row c.
            for (r, v) in h.row(c) {
                if acc[r] == 0.0 {
                    touched.push(r);
                }
                acc[r] += v * x;
            }
        }
        for i in j..m {
            let s: f64 = vectors[i].iter().map(|&(k, y)| y * acc[k]).sum();
            out[(i, j)] = s;
            out[(j, i)] = s;
        }
        for r in touched {
            acc[r] = 0.0;
        }
    }
    out
}

fn small_eigen(m: &Mat<f64>, dim: usize) -> Result<(Vec<f64>, Mat<f64>)> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| HtcError::EigenFailure {
            dim,
            max_abs: f64::NAN,
            asymmetry: f64::NAN,
            reason: format!("symmetry block of size {}: {e:?}", m.nrows()),
        })?;
    let s = evd.S().column_vector();
    Ok(((0..m.nrows()).map(|k| s[k]).collect(), evd.U().to_owned()))
}

/// Solves the block spanned by `vectors` and pushes `(ω, Σ_i y_i v_i)` for
/// each eigenpair, once per entry of `copies` (bases with identical blocks).
fn solve_block(
    h: &CsrMatrix,
    vectors: &[SparseVector],
    copies: &[Vec<SparseVector>],
    out: &mut Vec<(f64, SparseVector)>,
) -> Result<()> {
    if vectors.is_empty() {
        return Ok(());
    }
    let (w, y) = small_eigen(&project(h, vectors), h.nrows())?;
    for copy in copies {
        let (support, local) = to_dense(copy);
        let mixed = &local * &y;
        for (k, &wk) in w.iter().enumerate() {
            let v = support
                .iter()
                .enumerate()
                .map(|(r, &i)| (i, mixed[(r, k)]))
                .filter(|&(_, x)| x != 0.0)
                .collect();
            out.push((wk, v));
        }
    }
    Ok(())
}

/// Columns of `vectors` as a dense matrix over the union of their supports.
fn to_dense(vectors: &[SparseVector]) -> (Vec<usize>, Mat<f64>) {
    let mut support: Vec<usize> = vectors.iter().flatten().map(|&(k, _)| k).collect();
    support.sort_unstable();
    support.dedup();
    let row: HashMap<usize, usize> = support.iter().enumerate().map(|(r, &k)| (k, r)).collect();
    let mut m = Mat::zeros(support.len(), vectors.len());
    for (c, v) in vectors.iter().enumerate() {
        for &(k, x) in v {
            m[(row[&k], c)] = x;
        }
    }
    (support, m)
}

/// Gram–Schmidt over `templates`; returns, per output vector, its source
/// orbit and its coefficients over the templates.
fn gram_schmidt(templates: &[(usize, SparseVector)]) -> Vec<(usize, Vec<(usize, f64)>)> {
    let parts: Vec<SparseVector> = templates.iter().map(|(_, v)| v.clone()).collect();
    let mut basis: Vec<(usize, Vec<(usize, f64)>, SparseVector)> = Vec::new();
    for (t, (orbit, v)) in templates.iter().enumerate() {
        let norm0 = sparse_dot(v, v).sqrt();
        let mut coeffs = vec![(t, 1.0)];
        for (o, c, e) in &basis {
            if o != orbit {
                continue;
            }
            let p = sparse_dot(e, v);
            coeffs.extend(c.iter().map(|&(i, x)| (i, -p * x)));
        }
        let r = combine(&parts, &coeffs);
        let norm = sparse_dot(&r, &r).sqrt();
        if norm <= 1e-8 * norm0 {
            continue;
        }
        let coeffs: Vec<(usize, f64)> = merge(coeffs).into_iter().map(|(i, x)| (i, x / norm)).collect();
        let r = r.into_iter().map(|(k, x)| (k, x / norm)).collect();
        basis.push((*orbit, coeffs, r));
    }
    basis.into_iter().map(|(o, c, _)| (o, c)).collect()
}

fn merge(coeffs: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
    for (i, x) in coeffs {
        *acc.entry(i).or_insert(0.0) += x;
    }
    acc.into_iter().collect()
}

pub(crate) fn diagonalize_symmetric(h: &HtcMatrix, basis: &Basis) -> Result<Eigenpairs> {
    let dim = basis.len();
    let n = basis.n_molecules();
    let hm = h.matrix();
    let orbit_list: Vec<Vec<usize>> = orbits(basis).into_values().collect();
    let mut out: Vec<(f64, SparseVector)> = Vec::with_capacity(dim);

    let sym: Vec<SparseVector> = symmetric_sector(basis).into_iter().map(|(_, v)| v).collect();
    solve_block(hm, &sym, std::slice::from_ref(&sym), &mut out)?;

    if n >= 2 {
        let contrasts = helmert(n);
        let templates = |c: &[f64]| -> Vec<(usize, SparseVector)> {
            let mut t = Vec::new();
            for (o, idx) in orbit_list.iter().enumerate() {
                let nroles = roles(basis.state(idx[0])).len();
                for r in 0..nroles {
                    let v: SparseVector = idx
                        .iter()
                        .map(|&k| (k, c[roles(basis.state(k))[r] as usize]))
                        .filter(|&(_, x)| x != 0.0)
                        .collect();
                    t.push((o, v));
                }
            }
            t
        };
        let reference = templates(&contrasts[0]);
        let recipe = gram_schmidt(&reference);
        let copies: Vec<Vec<SparseVector>> = contrasts
            .iter()
            .map(|c| {
                let parts: Vec<SparseVector> = templates(c).into_iter().map(|(_, v)| v).collect();
                recipe.iter().map(|(_, coeffs)| combine(&parts, coeffs)).collect()
            })
            .collect();
        solve_block(hm, &copies[0].clone(), &copies, &mut out)?;

        // Remainder of each multi-role orbit: orthogonal complement of its
        // symmetric and contrast vectors.
        for (o, idx) in orbit_list.iter().enumerate() {
            if roles(basis.state(idx[0])).len() < 2 {
                continue;
            }
            let mut used: Vec<SparseVector> = vec![sym[o].clone()];
            for copy in &copies {
                for (r, (orbit, _)) in recipe.iter().enumerate() {
                    if *orbit == o {
                        used.push(copy[r].clone());
                    }
                }
            }
            let (support, q) = to_dense(&used);
            debug_assert_eq!(support, *idx);
            let m = idx.len();
            let proj = Mat::<f64>::identity(m, m) - &q * q.transpose();
            let (w, u) = small_eigen(&proj, dim)?;
            let complement: Vec<SparseVector> = (0..m)
                .filter(|&c| w[c] > 0.5)
                .map(|c| {
                    idx.iter()
                        .enumerate()
                        .map(|(l, &k)| (k, u[(l, c)]))
                        .filter(|&(_, x)| x != 0.0)
                        .collect()
                })
                .collect();
            solve_block(hm, &complement, std::slice::from_ref(&complement), &mut out)?;
        }
    }

    if out.len() != dim {
        return Err(HtcError::EigenFailure {
            dim,
            max_abs: hm.max_abs(),
            asymmetry: hm.max_asymmetry(),
            reason: format!("symmetry reduction produced {} of {dim} vectors", out.len()),
        });
    }
    Ok(finalize(out, dim, h.basis_fingerprint()))
}
