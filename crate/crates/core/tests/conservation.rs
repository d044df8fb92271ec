mod common;

use num_complex::Complex64;
use qubit_probe::analysis::{continuity_constant, current_from_density, current_series};
use qubit_probe::closed::{evolve_closed, tcl2_closed_n0, tcl2_closed_rate};
use qubit_probe::model::{build_hamiltonian, chain_modes};
use qubit_probe::open::{
    evolve_lindblad_sector, evolve_lindblad_sector_observed, tcl2_dephasing_n0,
    tcl2_dephasing_rate, IntegratorSettings, SectorDensityMatrix,
};
use qubit_probe::{ModelConfig, TimeGrid};

#[test]
fn closed_norm_and_energy() {
    for cfg in [
        ModelConfig::clean(10),
        ModelConfig::clean(7).with_fields(vec![2.0, -1.0, 0.5, 3.0, -4.0, 1.5, 0.0]),
    ] {
        let h = build_hamiltonian(&cfg)
            .matrix()
            .map(|x| Complex64::new(x, 0.0));
        let grid = TimeGrid::new(0.05, 60.0).unwrap();
        let psi = evolve_closed(&cfg, &grid);
        let energy = |a: &Vec<Complex64>| {
            let v = nalgebra::DVector::from_column_slice(a);
            (v.adjoint() * &h * v)[(0, 0)].re
        };
        let e0 = energy(&psi.values[0].amplitudes);
        for (_, s) in psi.iter() {
            assert!((s.norm() - 1.0).abs() < 1e-10);
            assert!((energy(&s.amplitudes) - e0).abs() < 1e-9);
        }
    }
}

#[test]
fn open_state_stays_physical() {
    for gamma in [0.1, 0.7, 3.0] {
        let cfg = ModelConfig::clean(6).with_gamma(gamma).with_g(0.8);
        let grid = TimeGrid::new(0.05, 30.0).unwrap();
        let rho = evolve_lindblad_sector(&cfg, &grid).unwrap();
        let mut last_purity = f64::INFINITY;
        for (_, r) in rho.iter() {
            assert!((r.trace() - 1.0).norm() < 1e-9);
            assert!(r.hermiticity_error() < 1e-10);
            assert!(r.min_eigenvalue() >= -1e-8);
            let p = r.purity();
            assert!(p <= last_purity + 1e-9, "purity rose at gamma={gamma}");
            last_purity = p;
        }
    }
}

/// Five-point derivative at interior sample `k`.
fn derivative(values: &[f64], k: usize, dt: f64) -> f64 {
    (values[k - 2] - 8.0 * values[k - 1] + 8.0 * values[k + 1] - values[k + 2]) / (12.0 * dt)
}

#[test]
fn continuity_with_single_constant() {
    let dt = 0.002;
    let mut pairs = Vec::new();
    let mut c_expected = None;
    for gamma in [0.0, 0.4, 2.5] {
        let cfg = ModelConfig::clean(5).with_gamma(gamma).with_g(0.6);
        let grid = TimeGrid::new(dt, 3.0).unwrap();
        let settings = IntegratorSettings {
            phase_step: 0.002,
            ..IntegratorSettings::default()
        };
        let (pops, _) = evolve_lindblad_sector_observed(&cfg, &grid, &settings, |r| {
            let n = r.populations();
            let j: Vec<f64> = (0..cfg.n_sites)
                .map(|b| current_from_density(r, &cfg, b))
                .collect();
            (n, j)
        })
        .unwrap();
        let c = continuity_constant(&cfg);
        assert_eq!(*c_expected.get_or_insert(c), c);
        for site in 0..=cfg.n_sites {
            let series: Vec<f64> = pops.values.iter().map(|(n, _)| n[site]).collect();
            for k in (2..series.len() - 2).step_by(25) {
                let (_, j) = &pops.values[k];
                let inflow = if site == 0 { 0.0 } else { j[site - 1] };
                let outflow = if site == cfg.n_sites { 0.0 } else { j[site] };
                pairs.push((derivative(&series, k, dt), inflow - outflow));
            }
        }
    }
    // least-squares c over every site, time and gamma
    let sxy: f64 = pairs.iter().map(|(d, f)| d * f).sum();
    let sxx: f64 = pairs.iter().map(|(_, f)| f * f).sum();
    let c = sxy / sxx;
    assert!((c - c_expected.unwrap()).abs() < 1e-7);
    let residual = pairs
        .iter()
        .map(|(d, f)| (d - c * f).abs())
        .fold(0.0, f64::max);
    assert!(residual <= 1e-6, "residual {residual}");
}

#[test]
fn two_site_continuity() {
    let cfg = ModelConfig::clean(1);
    let grid = TimeGrid::new(0.001, 10.0).unwrap();
    let rho = evolve_lindblad_sector(&cfg, &grid).unwrap();
    let j = current_series(&rho, &cfg, 0).unwrap();
    let n0: Vec<f64> = rho.values.iter().map(|r| r.qubit_population()).collect();
    let c = continuity_constant(&cfg);
    for k in (2..n0.len() - 2).step_by(100) {
        assert!((derivative(&n0, k, 0.001) + c * j.values[k]).abs() < 1e-8);
    }
    assert_eq!(j.values[0], 0.0);
}

#[test]
fn conjugation_flips_currents() {
    let cfg = ModelConfig::clean(4).with_gamma(0.3);
    let grid = TimeGrid::new(0.5, 5.0).unwrap();
    let rho = evolve_lindblad_sector(&cfg, &grid).unwrap();
    let r: &SectorDensityMatrix = rho.values.last().unwrap();
    let conj = r.conjugate();
    for bond in 0..4 {
        let (a, b) = (
            current_from_density(r, &cfg, bond),
            current_from_density(&conj, &cfg, bond),
        );
        assert!(a.abs() > 1e-6);
        assert_eq!(a, -b);
    }
}

#[test]
fn tcl2_closed_derivative_matches_rate() {
    let cfg = ModelConfig::clean(10);
    let modes = chain_modes(&cfg);
    let dt = 0.01;
    let grid = TimeGrid::new(dt, 30.0).unwrap();
    let n0 = tcl2_closed_n0(&modes, &cfg, &grid);
    for k in (1..n0.len() - 1).step_by(37) {
        let d = (n0.values[k + 1] - n0.values[k - 1]) / (2.0 * dt);
        let expected = -tcl2_closed_rate(&modes, &cfg, n0.time(k)) * n0.values[k];
        assert!((d - expected).abs() < 1e-5);
    }
    assert!(n0.values.iter().all(|&v| v > 0.0 && v <= 1.0));
}

#[test]
fn tcl2_dephasing_derivative_matches_rate() {
    for gamma in [0.05, 2.0] {
        let cfg = ModelConfig::clean(10).with_gamma(gamma);
        let modes = chain_modes(&cfg);
        let dt = 0.01;
        let grid = TimeGrid::new(dt, 60.0).unwrap();
        let n0 = tcl2_dephasing_n0(&modes, &cfg, &grid);
        for k in (1..n0.len() - 1).step_by(53) {
            let d = (n0.values[k + 1] - n0.values[k - 1]) / (2.0 * dt);
            let expected = -tcl2_dephasing_rate(&modes, &cfg, n0.time(k)) * n0.values[k];
            assert!((d - expected).abs() < 1e-5);
        }
    }
}

#[test]
fn dephasing_tcl2_is_monotone_at_gamma_two() {
    let cfg = ModelConfig::clean(10).with_gamma(2.0);
    let grid = TimeGrid::new(0.01, 60.0).unwrap();
    let n0 = tcl2_dephasing_n0(&chain_modes(&cfg), &cfg, &grid);
    assert!(n0.values.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn long_time_state_is_maximally_mixed() {
    let cfg = ModelConfig::clean(10).with_gamma(2.0);
    let grid = TimeGrid::new(50.0, 2000.0).unwrap();
    let (pops, _) =
        evolve_lindblad_sector_observed(&cfg, &grid, &IntegratorSettings::coarse(), |r| {
            r.populations()
        })
        .unwrap();
    let last = pops.values.last().unwrap();
    for p in last {
        assert!((p - 1.0 / 11.0).abs() < 0.02, "{last:?}");
    }
}
