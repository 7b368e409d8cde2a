//! Enumeration of the truncated one-excitation and ground manifolds.
//!
//! The excitation manifold keeps photon states dressed by at most one
//! vibrationally excited molecule (two with `photon_dressing`), single-particle
//! excitons on a vibrationless background, and two-particle states made of an
//! exciton plus one vibrationally excited ground-state spectator.

use std::collections::HashMap;
use std::hash::{DefaultHasher, Hash, Hasher};

use serde::Serialize;

use super::ModelParams;
use crate::error::{HtcError, Result};

/// Ground-state vibrational occupations, sorted by site, zero entries omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VibConfig(Vec<(u32, u32)>);

impl VibConfig {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn single(site: u32, quanta: u32) -> Self {
        Self::from_pairs([(site, quanta)])
    }

    /// Builds a configuration from `(site, quanta)` pairs; zero quanta are dropped.
    /// Panics if a site appears twice.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut v: Vec<(u32, u32)> = pairs.into_iter().filter(|&(_, q)| q > 0).collect();
        v.sort_unstable();
        assert!(
            v.windows(2).all(|w| w[0].0 != w[1].0),
            "duplicate site in vibrational configuration"
        );
        Self(v)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&(_, q)| q).sum()
    }

    pub fn quanta_at(&self, site: u32) -> u32 {
        self.0
            .binary_search_by_key(&site, |&(s, _)| s)
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    /// Number of vibrationally excited molecules.
    pub fn excited_sites(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0.iter().copied()
    }

    /// Copy with `site` set to `quanta` (0 removes it).
    pub fn with(&self, site: u32, quanta: u32) -> Self {
        Self::from_pairs(
            self.0
                .iter()
                .copied()
                .filter(|&(s, _)| s != site)
                .chain([(site, quanta)]),
        )
    }

    /// Sorted multiset of quanta, forgetting which molecule carries them.
    pub fn profile(&self) -> Vec<u32> {
        let mut q: Vec<u32> = self.0.iter().map(|&(_, q)| q).collect();
        q.sort_unstable_by(|a, b| b.cmp(a));
        q
    }

    fn relabel(&self, perm: &[u32]) -> Self {
        Self::from_pairs(self.0.iter().map(|&(s, q)| (perm[s as usize], q)))
    }
}

/// One state of a truncated manifold.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BasisState {
    /// All molecules electronically unexcited, no photon (ground manifold).
    Ground { vib: VibConfig },
    /// One cavity photon on a ground-state vibrational background.
    Photon { vib: VibConfig },
    /// Molecule `site` electronically excited with `vib` displaced quanta,
    /// every other molecule vibrationless.
    Exciton { site: u32, vib: u32 },
    /// Exciton at `site` plus a distinct ground-state molecule `spectator`
    /// carrying `spectator_vib ≥ 1` quanta.
    ExcitonPair {
        site: u32,
        vib: u32,
        spectator: u32,
        spectator_vib: u32,
    },
}

/// Coarse category of a [`BasisState`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StateKind {
    GroundVib,
    PhotonVib,
    ExcitonOneParticle,
    ExcitonTwoParticle,
}

/// Permutation-invariant label of a state: two states share an orbit key
/// iff a relabeling of the molecules maps one onto the other.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrbitKey {
    Ground(Vec<u32>),
    Photon(Vec<u32>),
    Exciton(u32),
    ExcitonPair(u32, u32),
}

impl BasisState {
    pub fn kind(&self) -> StateKind {
        match self {
            Self::Ground { .. } => StateKind::GroundVib,
            Self::Photon { .. } => StateKind::PhotonVib,
            Self::Exciton { .. } => StateKind::ExcitonOneParticle,
            Self::ExcitonPair { .. } => StateKind::ExcitonTwoParticle,
        }
    }

    /// Photon number (0 or 1).
    pub fn photon(&self) -> u32 {
        matches!(self, Self::Photon { .. }) as u32
    }

    /// Electronic plus photonic excitation number.
    pub fn excitation_number(&self) -> u32 {
        match self {
            Self::Ground { .. } => 0,
            _ => 1,
        }
    }

    pub fn is_exciton(&self) -> bool {
        matches!(self, Self::Exciton { .. } | Self::ExcitonPair { .. })
    }

    /// Total vibrational quanta, counting displaced quanta of the exciton.
    pub fn total_quanta(&self) -> u32 {
        match self {
            Self::Ground { vib } | Self::Photon { vib } => vib.total(),
            Self::Exciton { vib, .. } => *vib,
            Self::ExcitonPair {
                vib, spectator_vib, ..
            } => vib + spectator_vib,
        }
    }

    /// Largest per-molecule occupation.
    pub fn max_quanta(&self) -> u32 {
        match self {
            Self::Ground { vib } | Self::Photon { vib } => vib.iter().map(|(_, q)| q).max().unwrap_or(0),
            Self::Exciton { vib, .. } => *vib,
            Self::ExcitonPair {
                vib, spectator_vib, ..
            } => (*vib).max(*spectator_vib),
        }
    }

    /// For an exciton state: the excited site, its displaced quanta, and the
    /// ground-state vibrational background of the other molecules.
    pub fn exciton_parts(&self) -> Option<(u32, u32, VibConfig)> {
        match *self {
            Self::Exciton { site, vib } => Some((site, vib, VibConfig::empty())),
            Self::ExcitonPair {
                site,
                vib,
                spectator,
                spectator_vib,
            } => Some((site, vib, VibConfig::single(spectator, spectator_vib))),
            _ => None,
        }
    }

    pub fn orbit_key(&self) -> OrbitKey {
        match self {
            Self::Ground { vib } => OrbitKey::Ground(vib.profile()),
            Self::Photon { vib } => OrbitKey::Photon(vib.profile()),
            Self::Exciton { vib, .. } => OrbitKey::Exciton(*vib),
            Self::ExcitonPair {
                vib, spectator_vib, ..
            } => OrbitKey::ExcitonPair(*vib, *spectator_vib),
        }
    }

    /// The same state with molecule `k` relabeled to `perm[k]`.
    pub fn permuted(&self, perm: &[u32]) -> Self {
        match self {
            Self::Ground { vib } => Self::Ground {
                vib: vib.relabel(perm),
            },
            Self::Photon { vib } => Self::Photon {
                vib: vib.relabel(perm),
            },
            Self::Exciton { site, vib } => Self::Exciton {
                site: perm[*site as usize],
                vib: *vib,
            },
            Self::ExcitonPair {
                site,
                vib,
                spectator,
                spectator_vib,
            } => Self::ExcitonPair {
                site: perm[*site as usize],
                vib: *vib,
                spectator: perm[*spectator as usize],
                spectator_vib: *spectator_vib,
            },
        }
    }

    fn check_invariants(&self, n_molecules: usize) -> Result<()> {
        let n = n_molecules as u32;
        let ok = match self {
            Self::Ground { vib } | Self::Photon { vib } => vib.iter().all(|(s, _)| s < n),
            Self::Exciton { site, .. } => *site < n,
            Self::ExcitonPair {
                site,
                spectator,
                spectator_vib,
                ..
            } => *site < n && *spectator < n && site != spectator && *spectator_vib >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(HtcError::BasisMismatch(format!(
                "invalid state {self:?} for N = {n_molecules}"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Manifold {
    Excitation,
    Ground,
}

/// An ordered, duplicate-free list of states with its inverse index.
#[derive(Debug, Clone)]
pub struct Basis {
    manifold: Manifold,
    n_molecules: usize,
    states: Vec<BasisState>,
    index: HashMap<BasisState, usize>,
    fingerprint: u64,
}

impl Basis {
    /// Sorts `states` into canonical order. Fails on duplicates, on states of
    /// the wrong manifold, or on states that violate their kind's invariants.
    pub fn new(manifold: Manifold, n_molecules: usize, mut states: Vec<BasisState>) -> Result<Self> {
        for s in &states {
            let expected = match manifold {
                Manifold::Excitation => 1,
                Manifold::Ground => 0,
            };
            if s.excitation_number() != expected {
                return Err(HtcError::BasisMismatch(format!(
                    "{s:?} does not belong to the {manifold:?} manifold"
                )));
            }
            s.check_invariants(n_molecules)?;
        }
        states.sort_unstable();
        let mut index = HashMap::with_capacity(states.len());
        for (k, s) in states.iter().enumerate() {
            if index.insert(s.clone(), k).is_some() {
                return Err(HtcError::BasisMismatch(format!("duplicate state {s:?}")));
            }
        }
        let mut h = DefaultHasher::new();
        manifold.hash(&mut h);
        n_molecules.hash(&mut h);
        states.hash(&mut h);
        Ok(Self {
            manifold,
            n_molecules,
            states,
            index,
            fingerprint: h.finish(),
        })
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn n_molecules(&self) -> usize {
        self.n_molecules
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn state(&self, k: usize) -> &BasisState {
        &self.states[k]
    }

    pub fn position(&self, state: &BasisState) -> Option<usize> {
        self.index.get(state).copied()
    }

    /// Hash of the ordered state list, used to detect mismatched operands.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BasisState)> {
        self.states.iter().enumerate()
    }
}

/// Closed-form size of the excitation basis.
pub fn excitation_basis_count(params: &ModelParams) -> u128 {
    let n = params.n_molecules as u128;
    let v = params.nu_max as u128;
    let photon = 1 + n * v;
    let single = n * (v + 1);
    let pairs = n * n.saturating_sub(1) * (v + 1) * v;
    let dressed = if params.photon_dressing {
        n * n.saturating_sub(1) / 2 * v * v
    } else {
        0
    };
    photon + single + pairs + dressed
}

/// Closed-form size of the ground basis: C(N + g, g).
pub fn ground_basis_count(params: &ModelParams) -> u128 {
    let n = params.n_molecules as u128;
    let g = params.nu_max_ground as u128;
    let mut c: u128 = 1;
    for k in 1..=g {
        c = c * (n + k) / k;
    }
    c
}

fn check_cap(count: u128, cap: usize) -> Result<()> {
    if count > cap as u128 {
        Err(HtcError::BasisTooLarge { count, cap })
    } else {
        Ok(())
    }
}

/// All states of the one-excitation manifold under the two-particle truncation.
pub fn enumerate_excitation_basis(params: &ModelParams) -> Result<Basis> {
    params.validate()?;
    check_cap(excitation_basis_count(params), params.basis_cap)?;
    let n = params.n_molecules as u32;
    let vmax = params.nu_max;
    let mut states = Vec::with_capacity(excitation_basis_count(params) as usize);

    states.push(BasisState::Photon {
        vib: VibConfig::empty(),
    });
    for m in 0..n {
        for q in 1..=vmax {
            states.push(BasisState::Photon {
                vib: VibConfig::single(m, q),
            });
        }
    }
    if params.photon_dressing {
        for m in 0..n {
            for m2 in (m + 1)..n {
                for q in 1..=vmax {
                    for q2 in 1..=vmax {
                        states.push(BasisState::Photon {
                            vib: VibConfig::from_pairs([(m, q), (m2, q2)]),
                        });
                    }
                }
            }
        }
    }
    for site in 0..n {
        for vib in 0..=vmax {
            states.push(BasisState::Exciton { site, vib });
        }
    }
    for site in 0..n {
        for vib in 0..=vmax {
            for spectator in (0..n).filter(|&m| m != site) {
                for spectator_vib in 1..=vmax {
                    states.push(BasisState::ExcitonPair {
                        site,
                        vib,
                        spectator,
                        spectator_vib,
                    });
                }
            }
        }
    }
    Basis::new(Manifold::Excitation, params.n_molecules, states)
}

/// All vibrational configurations of the electronic ground state with at
/// most `nu_max_ground` quanta in total; `|G⟩` is always index 0.
pub fn enumerate_ground_basis(params: &ModelParams) -> Result<Basis> {
    params.validate()?;
    check_cap(ground_basis_count(params), params.basis_cap)?;
    let mut states = Vec::with_capacity(ground_basis_count(params) as usize);
    let mut current = Vec::new();
    compositions(
        params.n_molecules as u32,
        0,
        params.nu_max_ground,
        &mut current,
        &mut states,
    );
    Basis::new(Manifold::Ground, params.n_molecules, states)
}

fn compositions(n: u32, site: u32, budget: u32, current: &mut Vec<(u32, u32)>, out: &mut Vec<BasisState>) {
    if site == n {
        out.push(BasisState::Ground {
            vib: VibConfig::from_pairs(current.iter().copied()),
        });
        return;
    }
    compositions(n, site + 1, budget, current, out);
    for q in 1..=budget {
        current.push((site, q));
        compositions(n, site + 1, budget - q, current, out);
        current.pop();
    }
}
