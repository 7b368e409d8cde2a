//! Brute-force reference built from explicit tensor-product matrix elements.
//!
//! Each molecule is an electronic two-level system times an oscillator
//! represented in a truncated number basis. Displaced vibrational states come
//! from numerically diagonalizing `(b + λ)†(b + λ)` rather than from any
//! closed-form overlap, and every matrix element is a product of per-site
//! overlaps evaluated by plain loops.

use faer::{Mat, Side};
use htc_core::{BasisState, ModelParams};

const NUMBER_BASIS: usize = 60;

#[derive(Clone)]
struct Site {
    excited: bool,
    vib: Vec<f64>,
}

#[derive(Clone)]
pub struct ProductState {
    photons: u32,
    sites: Vec<Site>,
}

pub struct Oracle {
    n: usize,
    rabi: f64,
    detuning: f64,
    h_ground: Mat<f64>,
    h_excited: Mat<f64>,
    displaced: Vec<Vec<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn apply(m: &Mat<f64>, v: &[f64]) -> Vec<f64> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)] * v[c]).sum())
        .collect()
}

fn number_state(q: u32) -> Vec<f64> {
    let mut v = vec![0.0; NUMBER_BASIS];
    v[q as usize] = 1.0;
    v
}

impl Oracle {
    pub fn new(p: &ModelParams) -> Self {
        let k = NUMBER_BASIS;
        let lambda = p.huang_rhys.sqrt();
        let h_ground = Mat::from_fn(k, k, |r, c| if r == c { r as f64 } else { 0.0 });
        // (b + λ)†(b + λ) = b†b + λ(b + b†) + λ²
        let h_excited = Mat::from_fn(k, k, |r, c| {
            if r == c {
                r as f64 + lambda * lambda
            } else if r + 1 == c {
                lambda * (c as f64).sqrt()
            } else if c + 1 == r {
                lambda * (r as f64).sqrt()
            } else {
                0.0
            }
        });
        let evd = h_excited.self_adjoint_eigen(Side::Lower).unwrap();
        let s = evd.S().column_vector();
        let u = evd.U();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| s[a].total_cmp(&s[b]));
        let displaced = order
            .iter()
            .take(12)
            .map(|&c| {
                let mut v: Vec<f64> = (0..k).map(|r| u[(r, c)]).collect();
                // Fix the phase so the overlap with the undisplaced vacuum is positive.
                if v[0] < 0.0 || (v[0] == 0.0 && v.iter().find(|x| **x != 0.0).is_some_and(|x| *x < 0.0)) {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                v
            })
            .collect();
        Self {
            n: p.n_molecules,
            rabi: p.rabi_single,
            detuning: p.detuning,
            h_ground,
            h_excited,
            displaced,
        }
    }

    pub fn product_state(&self, s: &BasisState) -> ProductState {
        let mut sites: Vec<Site> = (0..self.n)
            .map(|_| Site {
                excited: false,
                vib: number_state(0),
            })
            .collect();
        let photons = match s {
            BasisState::Ground { vib } | BasisState::Photon { vib } => {
                for (m, q) in vib.iter() {
                    sites[m as usize].vib = number_state(q);
                }
                s.photon()
            }
            BasisState::Exciton { site, vib } => {
                sites[*site as usize] = Site {
                    excited: true,
                    vib: self.displaced[*vib as usize].clone(),
                };
                0
            }
            BasisState::ExcitonPair {
                site,
                vib,
                spectator,
                spectator_vib,
            } => {
                sites[*site as usize] = Site {
                    excited: true,
                    vib: self.displaced[*vib as usize].clone(),
                };
                sites[*spectator as usize].vib = number_state(*spectator_vib);
                0
            }
        };
        ProductState { photons, sites }
    }

    fn site_overlap(a: &Site, b: &Site) -> f64 {
        if a.excited != b.excited {
            0.0
        } else {
            dot(&a.vib, &b.vib)
        }
    }

    fn overlap_except(s: &ProductState, t: &ProductState, skip: Option<usize>) -> f64 {
        let mut prod = 1.0;
        for m in 0..s.sites.len() {
            if Some(m) != skip {
                prod *= Self::site_overlap(&s.sites[m], &t.sites[m]);
            }
        }
        prod
    }

    pub fn overlap(s: &ProductState, t: &ProductState) -> f64 {
        if s.photons != t.photons {
            return 0.0;
        }
        Self::overlap_except(s, t, None)
    }

    /// `⟨s|H|t⟩` in the frame rotating at the 0-0 frequency.
    pub fn hamiltonian_element(&self, s: &ProductState, t: &ProductState) -> f64 {
        let mut total = 0.0;
        if s.photons == t.photons {
            for n in 0..self.n {
                let (a, b) = (&s.sites[n], &t.sites[n]);
                if a.excited != b.excited {
                    continue;
                }
                let h = if a.excited {
                    &self.h_excited
                } else {
                    &self.h_ground
                };
                total += dot(&a.vib, &apply(h, &b.vib)) * Self::overlap_except(s, t, Some(n));
            }
            total -= self.detuning * s.photons as f64 * Self::overlap_except(s, t, None);
        }
        for n in 0..self.n {
            let (a, b) = (&s.sites[n], &t.sites[n]);
            // a† σ_n⁻ and its conjugate.
            let raising_photon = s.photons == t.photons + 1 && !a.excited && b.excited;
            let lowering_photon = t.photons == s.photons + 1 && a.excited && !b.excited;
            if raising_photon || lowering_photon {
                let photons = s.photons.max(t.photons) as f64;
                total += 0.5
                    * self.rabi
                    * photons.sqrt()
                    * dot(&a.vib, &b.vib)
                    * Self::overlap_except(s, t, Some(n));
            }
        }
        total
    }

    /// `⟨g|â|t⟩` for a ground-manifold product state `g`.
    pub fn a_element(&self, g: &ProductState, t: &ProductState) -> f64 {
        if t.photons != g.photons + 1 {
            return 0.0;
        }
        Self::overlap_except(g, t, None)
    }

    fn lowered(t: &ProductState, n: usize) -> Option<ProductState> {
        if !t.sites[n].excited {
            return None;
        }
        let mut out = t.clone();
        out.sites[n].excited = false;
        Some(out)
    }

    /// `⟨g|Ĵ₋|t⟩` with `Ĵ₋ = N^{-1/2} Σ_n σ_n⁻`.
    pub fn jminus_element(&self, g: &ProductState, t: &ProductState) -> f64 {
        let mut total = 0.0;
        for n in 0..self.n {
            if let Some(l) = Self::lowered(t, n) {
                total += Self::overlap(g, &l);
            }
        }
        total / (self.n as f64).sqrt()
    }

    /// `⟨s|Ĵ₊Ĵ₋|t⟩`, summing over the complete ground manifold.
    pub fn jplus_jminus(&self, s: &ProductState, t: &ProductState) -> f64 {
        let mut total = 0.0;
        for m in 0..self.n {
            let Some(ls) = Self::lowered(s, m) else { continue };
            for n in 0..self.n {
                if let Some(lt) = Self::lowered(t, n) {
                    total += Self::overlap(&ls, &lt);
                }
            }
        }
        total / self.n as f64
    }

    pub fn photon_number(&self, s: &ProductState, t: &ProductState) -> f64 {
        s.photons as f64 * Self::overlap(s, t)
    }
}

/// Ground-manifold configurations with at most `g` quanta in total, by nested loops.
pub fn ground_configurations(n: usize, g: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; n]];
    for _ in 0..g {
        let mut next = Vec::new();
        for c in &out {
            for m in 0..n {
                let mut d = c.clone();
                d[m] += 1;
                next.push(d);
            }
        }
        out.extend(next);
        out.sort();
        out.dedup();
    }
    out.retain(|c| c.iter().sum::<u32>() <= g);
    out
}

pub fn ground_product_state(config: &[u32]) -> ProductState {
    ProductState {
        photons: 0,
        sites: config
            .iter()
            .map(|&q| Site {
                excited: false,
                vib: number_state(q),
            })
            .collect(),
    }
}

/// Eigenstates and observables of the brute-force model on the same state list.
pub struct OracleSpectrum {
    pub omega: Vec<f64>,
    pub a_g: Vec<f64>,
    pub mu_fraction: Vec<f64>,
    pub gamma: Vec<f64>,
    pub f_emission: Vec<f64>,
    /// `(ν_i, ⟨ε_i|â|ε_j⟩)` per eigenstate.
    pub a_lines: Vec<Vec<(u32, f64)>>,
}

pub fn oracle_matrix(p: &ModelParams, states: &[BasisState]) -> Mat<f64> {
    let o = Oracle::new(p);
    let prod: Vec<ProductState> = states.iter().map(|s| o.product_state(s)).collect();
    Mat::from_fn(prod.len(), prod.len(), |r, c| {
        o.hamiltonian_element(&prod[r], &prod[c])
    })
}

pub fn oracle_spectrum(p: &ModelParams, states: &[BasisState]) -> OracleSpectrum {
    let o = Oracle::new(p);
    let prod: Vec<ProductState> = states.iter().map(|s| o.product_state(s)).collect();
    let d = prod.len();
    let h = Mat::from_fn(d, d, |r, c| o.hamiltonian_element(&prod[r], &prod[c]));
    let evd = h.self_adjoint_eigen(Side::Lower).unwrap();
    let s = evd.S().column_vector();
    let u = evd.U();
    let ground: Vec<(u32, ProductState)> = ground_configurations(p.n_molecules, p.nu_max_ground)
        .into_iter()
        .map(|c| (c.iter().sum(), ground_product_state(&c)))
        .collect();
    let vacuum = ground_product_state(&vec![0; p.n_molecules]);
    let a_rows: Vec<Vec<f64>> = ground
        .iter()
        .map(|(_, g)| prod.iter().map(|t| o.a_element(g, t)).collect())
        .collect();
    let j_vac: Vec<f64> = prod.iter().map(|t| o.jminus_element(&vacuum, t)).collect();
    let jj = Mat::from_fn(d, d, |r, c| o.jplus_jminus(&prod[r], &prod[c]));
    let nn = Mat::from_fn(d, d, |r, c| o.photon_number(&prod[r], &prod[c]));
    let n = p.n_molecules as f64;

    let mut out = OracleSpectrum {
        omega: Vec::new(),
        a_g: Vec::new(),
        mu_fraction: Vec::new(),
        gamma: Vec::new(),
        f_emission: Vec::new(),
        a_lines: Vec::new(),
    };
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| s[a].total_cmp(&s[b]));
    for &j in &order {
        let v: Vec<f64> = (0..d).map(|k| u[(k, j)]).collect();
        let quad = |m: &Mat<f64>| -> f64 {
            (0..d)
                .map(|r| v[r] * (0..d).map(|c| m[(r, c)] * v[c]).sum::<f64>())
                .sum()
        };
        let decay = quad(&jj);
        let photon = quad(&nn);
        let lines: Vec<(u32, f64)> = ground
            .iter()
            .zip(&a_rows)
            .map(|((q, _), row)| (*q, dot(row, &v)))
            .collect();
        out.omega.push(s[j]);
        out.a_g.push(lines[0].1);
        out.mu_fraction.push(dot(&j_vac, &v).powi(2));
        out.gamma.push(p.kappa * photon + p.gamma_e_collective * decay);
        out.f_emission.push(n * decay);
        out.a_lines.push(lines);
    }
    out
}

fn lorentzian(w: f64, w0: f64, k: f64) -> f64 {
    k / ((w - w0) * (w - w0) + k * k)
}

/// Through-mirror absorption straight from the eigen data, pump strength 1.
pub fn oracle_absorption(o: &OracleSpectrum, grid: &[f64]) -> Vec<f64> {
    grid.iter()
        .map(|&w| {
            (0..o.omega.len())
                .filter(|&j| o.gamma[j] > 0.0)
                .map(|j| {
                    let k = o.gamma[j] / 2.0;
                    std::f64::consts::PI * o.a_g[j].powi(2) * (k / o.gamma[j]) * o.f_emission[j]
                        / ((w - o.omega[j]).powi(2) + k * k)
                })
                .sum()
        })
        .collect()
}

/// Leakage PL for a Gaussian population normalized to unit total.
pub fn oracle_lpl(
    o: &OracleSpectrum,
    grid: &[f64],
    center: f64,
    sigma: f64,
    nu_max: u32,
    floor: f64,
) -> Vec<f64> {
    let raw: Vec<f64> = o
        .omega
        .iter()
        .map(|w| (-(w - center).powi(2) / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = raw.iter().sum();
    grid.iter()
        .map(|&w| {
            (0..o.omega.len())
                .map(|j| {
                    let k = (o.gamma[j] / 2.0).max(floor);
                    o.a_lines[j]
                        .iter()
                        .filter(|(q, _)| *q <= nu_max)
                        .map(|(q, a)| raw[j] / total * a * a * lorentzian(w, o.omega[j] - *q as f64, k))
                        .sum::<f64>()
                })
                .sum()
        })
        .collect()
}
