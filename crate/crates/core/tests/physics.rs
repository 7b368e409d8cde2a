mod common;

use common::{ensemble, poisson_tail};
use htc_core::*;

fn tc(n: usize, collective: f64) -> ModelParams {
    ModelParams {
        n_molecules: n,
        huang_rhys: 0.0,
        kappa: 0.1,
        gamma_e_collective: 0.2,
        nu_max: 2,
        nu_max_ground: 1,
        ..Default::default()
    }
    .with_collective_rabi(collective)
}

/// Splitting of the two-particle doublet near `center`, as max − min of the
/// eigenvalues within 0.3 ω_v of it.
pub fn doublet_splitting(p: &ModelParams, center: f64) -> f64 {
    let sys = solve(p, Solver::Dense).unwrap();
    let near: Vec<f64> = sys
        .omega()
        .iter()
        .copied()
        .filter(|w| (w - center).abs() < 0.3)
        .collect();
    near.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - near.iter().copied().fold(f64::INFINITY, f64::min)
}

#[test]
fn tavis_cummings_limit_with_vibrations_switched_off() {
    for n in [1, 2, 4] {
        let p = tc(n, 1.6);
        let sys = solve(&p, Solver::Dense).unwrap();
        let lp = sys.find(Label::LP).unwrap();
        let up = sys.find(Label::UP).unwrap();
        assert!((sys.omega()[lp] + 0.8).abs() < 1e-10);
        assert!((sys.omega()[up] - 0.8).abs() < 1e-10);
        assert!((sys.photon_weight()[lp] - 0.5).abs() < 1e-10);
        assert!((sys.photon_weight()[up] - 0.5).abs() < 1e-10);
        let half = (p.kappa + p.gamma_e_collective) / 2.0;
        assert!((sys.gamma()[lp] - half).abs() < 1e-10);
        assert!((sys.gamma()[up] - half).abs() < 1e-10);
        assert!(
            sys.find(Label::X).is_none() && sys.find(Label::Y).is_none() && sys.find(Label::Xb).is_none()
        );
        let dark_at_zero = (0..sys.len())
            .filter(|&j| sys.omega()[j].abs() < 1e-10 && sys.photon_weight()[j] < 1e-12)
            .count();
        assert_eq!(dark_at_zero, n - 1);
    }
}

#[test]
fn tavis_cummings_spectra() {
    let p = tc(3, 1.6);
    let sys = solve(&p, Solver::Dense).unwrap();
    let grid = Grid::default();
    let opts = LineOptions::default();
    let abs = absorption_spectrum(&sys, &grid, 1.0, &opts).unwrap();
    let peaks = abs.peaks(0.1);
    assert_eq!(peaks.len(), 2);
    assert!((abs.grid[peaks[0]] + 0.8).abs() < 2e-3 && (abs.grid[peaks[1]] - 0.8).abs() < 2e-3);
    assert!((abs.raw[peaks[0]] - abs.raw[peaks[1]]).abs() < 1e-9 * abs.raw[peaks[0]]);

    let bound = bound_absorption(&sys, &grid, &opts).unwrap();
    let total = bound.stick_total();
    for s in &bound.sticks {
        if s.strength > 1e-12 * total {
            assert!((s.omega.abs() - 0.8).abs() < 1e-10);
            assert!((s.strength / total - 0.5).abs() < 1e-10);
        }
    }

    let lp = sys.find(Label::LP).unwrap();
    let line = lineshape(&sys, lp, Operator::A, &grid, &opts).unwrap();
    assert_eq!(line.sticks.len(), 1);
    assert!((line.sticks[0].strength - 0.5).abs() < 1e-10);

    let lpl = lpl_spectrum(&sys, &PopulationModel::Delta { state: lp }, &grid, 1, &opts).unwrap();
    assert!((lpl.grid[lpl.argmax().unwrap()] + 0.8).abs() < 2e-3);
    let pop = PopulationModel::UniformWindow { min: -2.5, max: 1.3 };
    let shift = lp_blueshift(&sys, &pop, &grid, 1, &opts).unwrap();
    assert!(shift.delta.abs() <= 2.0 * grid.step, "{shift:?}");
}

#[test]
fn no_coupling_means_no_absorption() {
    // Detuned so the bare photon is not degenerate with the excitons.
    let p = ModelParams {
        detuning: 0.3,
        ..ensemble(3, 0.0)
    };
    let sys = solve(&p, Solver::Dense).unwrap();
    let photon = (0..sys.len()).find(|&j| sys.a_g()[j].abs() > 0.5).unwrap();
    assert!((sys.omega()[photon] + 0.3).abs() < 1e-12);
    assert!((sys.a_g()[photon].abs() - 1.0).abs() < 1e-12);
    // The bare photon line carries no emission strength, so the absorption
    // weight |aG|²·F vanishes for it as well as for the dark molecules.
    assert!(sys.f_emission()[photon] < 1e-24);
    let abs = absorption_spectrum(&sys, &Grid::default(), 1.0, &LineOptions::default()).unwrap();
    assert!(abs.raw.iter().all(|&a| a == 0.0));
    // Bound absorption still sees the molecular progression.
    let bound = bound_absorption(&sys, &Grid::default(), &LineOptions::default()).unwrap();
    assert!(bound.stick_total() > 0.9);
}

#[test]
fn two_particle_doublets_follow_the_diabatic_splitting() {
    for n in [3usize, 5] {
        // ν̃ = 0 doublet at one quantum with λ² = 1, where ⟨1|1̃⟩ = 0
        // removes the single-particle admixture.
        let p = ModelParams {
            n_molecules: n,
            huang_rhys: 1.0,
            nu_max: 4,
            ..Default::default()
        }
        .with_collective_rabi(0.1);
        let expected =
            2.0 * ((n - 1) as f64).sqrt() * fc_overlap(0, 0, p.lambda()).unwrap() * p.rabi_single / 2.0;
        let got = doublet_splitting(&p, 1.0);
        assert!((got / expected - 1.0).abs() < 0.02, "N={n}: {got} vs {expected}");

        // ν̃ = 1 doublet with the cavity on the 0-1 line and λ² = 2 (⟨1|2̃⟩ = 0).
        let p = ModelParams {
            huang_rhys: 2.0,
            detuning: -1.0,
            ..p
        };
        let expected =
            2.0 * ((n - 1) as f64).sqrt() * fc_overlap(0, 1, p.lambda()).unwrap() * p.rabi_single / 2.0;
        let got = doublet_splitting(&p, 2.0);
        assert!((got / expected - 1.0).abs() < 0.02, "N={n}: {got} vs {expected}");
    }
}

#[test]
fn sum_rules_across_parameters() {
    for (n, s, collective) in [(1, 1.0, 1.7), (2, 0.5, 2.0), (4, 1.0, 2.4), (3, 0.1, 0.5)] {
        let p = ModelParams {
            huang_rhys: s,
            nu_max_ground: 2,
            ..ensemble(n, collective)
        };
        let sys = solve(&p, Solver::Auto).unwrap();
        let a: f64 = sys.a_g().iter().map(|x| x * x).sum();
        assert!((a - 1.0).abs() < 1e-10);
        let mu: f64 = (0..sys.len()).map(|j| sys.mu_fraction(j)).sum();
        assert!((mu - (1.0 - poisson_tail(s, p.nu_max))).abs() < 1e-10);
        let total_f: f64 = sys.f_emission().iter().sum();
        // Σ_j F_j = N Tr(J₊J₋) over the exciton states = N(N_exciton)/N.
        let excitons = enumerate_excitation_basis(&p)
            .unwrap()
            .states()
            .iter()
            .filter(|s| s.is_exciton())
            .count();
        assert!((total_f - excitons as f64).abs() < 1e-9);
    }
}

#[test]
fn lorentzian_normalization() {
    let p = ensemble(2, 2.0);
    let sys = solve(&p, Solver::Dense).unwrap();
    let opts = LineOptions::default();
    for j in [0, sys.len() / 2, sys.len() - 1] {
        let kappa = (sys.gamma()[j] / 2.0).max(opts.kappa_floor);
        let lines: Vec<f64> = (0..sys.ground_quanta().len())
            .map(|i| sys.omega()[j] - sys.ground_quanta()[i] as f64)
            .collect();
        let lo = lines.iter().copied().fold(f64::INFINITY, f64::min) - 40.0 * kappa;
        let hi = lines.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 40.0 * kappa;
        let grid = Grid::new(lo, hi, kappa / 50.0).unwrap();
        for op in [Operator::A, Operator::JMinus] {
            let s = lineshape(&sys, j, op, &grid, &opts).unwrap();
            let strength: f64 = s.sticks.iter().map(|s| s.strength).sum();
            if strength > 1e-12 {
                let rel = s.integral() / (std::f64::consts::PI * strength) - 1.0;
                assert!(rel.abs() < 0.02, "state {j} {op:?}: {rel}");
            }
        }
    }
}

#[test]
fn adding_vibrational_channels_never_lowers_emission() {
    let p = ModelParams {
        nu_max_ground: 2,
        ..ensemble(3, 2.2)
    };
    let sys = solve(&p, Solver::Dense).unwrap();
    let grid = Grid::default();
    let opts = LineOptions::default();
    let pop = PopulationModel::UniformWindow { min: -2.5, max: 1.3 };
    let curves: Vec<SpectralSeries> = (0..=2)
        .map(|g| lpl_spectrum(&sys, &pop, &grid, g, &opts).unwrap())
        .collect();
    for pair in curves.windows(2) {
        assert!(pair[0].raw.iter().zip(&pair[1].raw).all(|(a, b)| b >= a));
    }
    assert!(curves.iter().flat_map(|c| c.raw.iter()).all(|v| *v >= 0.0));
    assert!(lpl_spectrum(&sys, &pop, &grid, 3, &opts).is_err());
}

#[test]
fn grid_refinement_is_stable() {
    let p = ensemble(3, 2.2);
    let sys = solve(&p, Solver::Dense).unwrap();
    let opts = LineOptions::default();
    let coarse = Grid::new(-2.5, 2.5, 0.004).unwrap();
    let fine = Grid::new(-2.5, 2.5, 0.002).unwrap();
    let a = absorption_spectrum(&sys, &coarse, 1.0, &opts).unwrap();
    let b = absorption_spectrum(&sys, &fine, 1.0, &opts).unwrap();
    let (pa, pb) = (a.peaks(0.1), b.peaks(0.1));
    assert_eq!(pa.len(), pb.len());
    for (x, y) in pa.iter().zip(&pb) {
        assert!((a.grid[*x] - b.grid[*y]).abs() < coarse.step);
    }
    assert!((a.integral() / b.integral() - 1.0).abs() < 0.01);
}

#[test]
fn zero_energy_state_has_zero_dipole() {
    for (n, s) in [(1usize, 1.0), (4, 0.5), (4, 0.1)] {
        let base = ModelParams {
            huang_rhys: s,
            ..ensemble(n, 1.0)
        };
        let root_n = (n as f64).sqrt();
        let c =
            find_critical_coupling(&base, (1.5 / root_n, 3.0 / root_n), &CriticalOptions::default()).unwrap();
        let sys = solve(&base.with_rabi(c.rabi_single), Solver::Dense).unwrap();
        let x = (0..sys.len())
            .min_by(|&a, &b| sys.omega()[a].abs().total_cmp(&sys.omega()[b].abs()))
            .unwrap();
        assert!(sys.omega()[x].abs() < 1e-6);
        assert!(sys.mu_fraction(x) < 1e-10, "{}", sys.mu_fraction(x));
        assert_eq!(sys.labels()[x], Label::X);
    }
}

#[test]
fn ensemble_at_critical_coupling_has_dark_vibronic_states() {
    let base = ensemble(6, 1.0);
    let root_n = 6f64.sqrt();
    let c = find_critical_coupling(&base, (1.5 / root_n, 3.0 / root_n), &CriticalOptions::default()).unwrap();
    let sys = solve(&base.with_rabi(c.rabi_single), Solver::Auto).unwrap();
    for label in [Label::LP, Label::UP, Label::X, Label::Xb, Label::Y] {
        assert!(sys.find(label).is_some(), "missing {label}");
    }
    // Each Y level is (N−1)-fold; a cluster may also hold an unrelated
    // state that happens to lie within the degeneracy tolerance.
    let ys = sys.states_with(Label::Y);
    for &j in &ys {
        let same = ys
            .iter()
            .filter(|&&k| sys.cluster()[k] == sys.cluster()[j])
            .count();
        assert_eq!(same, 5, "cluster at {}", sys.omega()[j]);
    }
}
