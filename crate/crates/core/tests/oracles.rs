mod common;

use num_complex::Complex64;
use penning_rydberg::dynamics::{analytic_p_left, propagate, time_grid, BasisState, TransferSystem};
use penning_rydberg::electronic::n_of_energy_au;
use penning_rydberg::spectral::{
    solve_parity, tunnel_pairs, FnPotential, NWindow, Parity, SolverGrid, SolverSettings,
};
use penning_rydberg::special::erfcx;

#[test]
fn erfcx_matches_extended_precision_series() {
    let mut worst = (0.0, 0.0);
    for x in common::erfcx_test_points() {
        let reference = common::erfcx_reference(x);
        let rel = ((erfcx(x).unwrap() - reference) / reference).abs();
        if rel > worst.1 {
            worst = (x, rel);
        }
    }
    assert!(worst.1 < 1e-10, "worst relative error {:e} at x = {}", worst.1, worst.0);
}

#[test]
fn erfcx_oracle_sanity() {
    assert!((common::erfcx_reference(0.0) - 1.0).abs() < 1e-15);
    assert!((common::erfcx_reference(1.0) - 0.427_583_576_155_807).abs() < 1e-15);
    // both oracle branches agree where they meet
    let a = common::erfcx_reference(6.0);
    let b = common::erfcx_reference(6.000_000_000_001);
    assert!(((a - b) / a).abs() < 1e-11);
}

fn model() -> (
    FnPotential<impl Fn(f64) -> f64 + Sync>,
    NWindow,
    SolverGrid,
    SolverSettings,
) {
    let a = 2.0;
    let pot = FnPotential {
        f: common::soft_double_well(a),
        outer_well: a,
    };
    let window = NWindow::new(n_of_energy_au(-1.3), n_of_energy_au(-0.3)).unwrap();
    let grid = SolverGrid {
        step: 0.04,
        half_width: 20.0,
        levels: 3,
    };
    let settings = SolverSettings {
        scan_step_n: 0.002,
        n_tolerance: 1e-5,
    };
    (pot, window, grid, settings)
}

#[test]
fn shooting_matches_dense_diagonalisation() {
    let (pot, window, grid, settings) = model();
    let mut shooting: Vec<(f64, Parity)> = [Parity::Gerade, Parity::Ungerade]
        .into_iter()
        .flat_map(|p| solve_parity(&pot, p, window, &grid, &settings).unwrap())
        .map(|s| (s.energy_hartree(), s.parity))
        .collect();
    shooting.sort_by(|a, b| a.0.total_cmp(&b.0));
    assert!(shooting.len() >= 4, "{shooting:?}");

    let dense = common::dense_levels_extrapolated(common::soft_double_well(2.0), 20.0, 0.08, 12);
    let dense: Vec<f64> = dense.into_iter().filter(|e| *e < -0.3).collect();
    assert_eq!(dense.len(), shooting.len());
    for (k, ((e, parity), d)) in shooting.iter().zip(&dense).enumerate() {
        assert!(((e - d) / d).abs() < 1e-6, "level {k}: {e} vs {d}");
        // parities alternate from the ground state up
        let expected = if k % 2 == 0 { Parity::Gerade } else { Parity::Ungerade };
        assert_eq!(*parity, expected, "level {k}");
    }
}

#[test]
fn pairs_are_adjacent_dense_levels() {
    let (pot, window, grid, settings) = model();
    let spectrum = tunnel_pairs(&pot, window, &grid, &settings).unwrap();
    let dense = common::dense_levels_extrapolated(common::soft_double_well(2.0), 20.0, 0.08, 12);
    for (i, pair) in spectrum.pairs.iter().enumerate() {
        let g = pair.gerade.energy_hartree();
        let u = pair.ungerade.energy_hartree();
        assert!(((g - dense[2 * i]) / g).abs() < 1e-6);
        assert!(((u - dense[2 * i + 1]) / u).abs() < 1e-6);
        assert_eq!(pair.gerade.half_nodes, i);
    }
    let kappas: Vec<f64> = spectrum.pairs.iter().map(|p| p.kappa).collect();
    assert!(kappas.windows(2).all(|w| w[1] > w[0]), "{kappas:?}");
}

#[test]
fn propagator_matches_rk4() {
    let start = BasisState::GroundRight.ket();
    let times = time_grid(40.0, 81);
    for delta in [0.01, 0.2, 0.5, 1.0, 2.5, 10.0, 100.0] {
        let sys = TransferSystem::from_ratio(delta);
        let exact = propagate(&sys, &start, &times);
        let dt = 2e-3 / f64::max(1.0, delta);
        let rk = common::rk4_evolve(&sys.scaled_hamiltonian(), start, &times, dt);
        for (pop, psi) in exact.populations.iter().zip(&rk) {
            for k in 0..4 {
                assert!((pop[k] - psi[k].norm_sqr()).abs() < 1e-6, "delta {delta}");
            }
        }
    }
}

#[test]
fn rk4_confirms_closed_form_left_population() {
    let start = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
    ];
    let times = time_grid(20.0, 41);
    let delta = 0.5;
    let sys = TransferSystem::from_ratio(delta);
    let rk = common::rk4_evolve(&sys.scaled_hamiltonian(), start, &times, 1e-3);
    for (t, psi) in times.iter().zip(&rk) {
        let p = psi[0].norm_sqr() + psi[1].norm_sqr();
        assert!((p - analytic_p_left(*t, delta)).abs() < 1e-8);
    }
}
