//! Bond currents, current-maximum scans, light-cone grids and power-law fits.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelConfig;
use crate::open::{evolve_lindblad_sector_observed, IntegratorSettings, SectorDensityMatrix};
use crate::series::{TimeGrid, TimeSeries};

/// Ratio of bond `i`'s hopping amplitude to the chain's `J/2`: 1 on chain
/// bonds, `2g/J` on the qubit bond (1 if `J = 0`).
pub fn bond_weight(cfg: &ModelConfig, bond: usize) -> f64 {
    if bond == 0 && cfg.j_coupling != 0.0 {
        2.0 * cfg.g_coupling / cfg.j_coupling
    } else {
        1.0
    }
}

/// `c` in `dn_i/dt = c (J_{i−1,i} − J_{i,i+1})`.
pub fn continuity_constant(cfg: &ModelConfig) -> f64 {
    if cfg.j_coupling != 0.0 {
        cfg.j_coupling / 8.0
    } else {
        cfg.g_coupling / 4.0
    }
}

fn check_bond(cfg: &ModelConfig, bond: usize) -> Result<()> {
    if bond >= cfg.n_sites {
        return Err(Error::IndexOutOfRange {
            index: bond,
            limit: cfg.n_sites,
        });
    }
    Ok(())
}

/// `⟨2(σˣ_iσʸ_{i+1} − σʸ_iσˣ_{i+1})⟩ = 8 Im ρ_{i,i+1}` in the sector, weighted
/// by [`bond_weight`] so one continuity constant covers every bond.
pub fn current_from_density(rho: &SectorDensityMatrix, cfg: &ModelConfig, bond: usize) -> f64 {
    8.0 * bond_weight(cfg, bond) * rho.entry(bond, bond + 1).im
}

/// Current across bond `i` (bond 0 joins the qubit to site 1).
pub fn current_series(
    rho: &TimeSeries<SectorDensityMatrix>,
    cfg: &ModelConfig,
    bond: usize,
) -> Result<TimeSeries<f64>> {
    check_bond(cfg, bond)?;
    Ok(rho.map(|r| current_from_density(r, cfg, bond)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurrentScanPoint {
    pub gamma: f64,
    pub bond: usize,
    pub max_current: f64,
    pub t_at_max: f64,
}

/// `max_t |J_{i,i+1}(t)|` for every `(γ, bond)` pair, one sector run per γ.
/// The grid comes from the template's `time_step`/`t_max`.
pub fn max_current_scan(
    template: &ModelConfig,
    bonds: &[usize],
    gammas: &[f64],
    settings: &IntegratorSettings,
) -> Result<Vec<CurrentScanPoint>> {
    for &b in bonds {
        check_bond(template, b)?;
    }
    if let Some(&g) = gammas.iter().find(|&&g| g.is_nan() || g <= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "scan gammas must be positive, got {g}"
        )));
    }
    let grid = template.grid()?;
    let per_gamma: Vec<Vec<CurrentScanPoint>> = gammas
        .par_iter()
        .map(|&gamma| scan_one(template, bonds, gamma, &grid, settings))
        .collect::<Result<_>>()?;
    Ok(per_gamma.into_iter().flatten().collect())
}

fn scan_one(
    template: &ModelConfig,
    bonds: &[usize],
    gamma: f64,
    grid: &TimeGrid,
    settings: &IntegratorSettings,
) -> Result<Vec<CurrentScanPoint>> {
    let cfg = template.clone().with_gamma(gamma);
    let (series, _) = evolve_lindblad_sector_observed(&cfg, grid, settings, |rho| {
        bonds
            .iter()
            .map(|&b| current_from_density(rho, &cfg, b))
            .collect::<Vec<_>>()
    })?;
    let last = series.len() - 1;
    bonds
        .iter()
        .enumerate()
        .map(|(col, &bond)| {
            let (k, max_current) = series
                .values
                .iter()
                .map(|row| row[col].abs())
                .enumerate()
                .fold((0, 0.0), |acc, (k, v)| if v > acc.1 { (k, v) } else { acc });
            if k == last && max_current > 0.0 {
                return Err(Error::HorizonTooShort {
                    t: series.time(k),
                    gamma,
                });
            }
            Ok(CurrentScanPoint {
                gamma,
                bond,
                max_current,
                t_at_max: series.time(k),
            })
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::Degenerate(format!(
            "need at least 2 points, got {}",
            points.len()
        )));
    }
    if let Some(p) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(Error::Degenerate(format!("non-positive point {p:?}")));
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("all x values equal".into()));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(sxy / sxx)
}

/// Site populations `(n_0, …, n_N)` along the sector trajectory.
pub fn lightcone_grid(
    cfg: &ModelConfig,
    grid: &TimeGrid,
    settings: &IntegratorSettings,
) -> Result<TimeSeries<Vec<f64>>> {
    let (series, _) =
        evolve_lindblad_sector_observed(cfg, grid, settings, SectorDensityMatrix::populations)?;
    Ok(series)
}

/// First time the population of `site` reaches `threshold`, linearly
/// interpolated between samples.
pub fn arrival_time(
    populations: &TimeSeries<Vec<f64>>,
    site: usize,
    threshold: f64,
) -> Option<f64> {
    let col = populations.column(site);
    let k = col.values.iter().position(|&p| p >= threshold)?;
    if k == 0 {
        return Some(col.t0);
    }
    let (p0, p1) = (col.values[k - 1], col.values[k]);
    Some(col.time(k - 1) + col.dt * (threshold - p0) / (p1 - p0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_hamiltonian;
    use crate::open::evolve_lindblad_sector;

    fn bond_amplitude(cfg: &ModelConfig, bond: usize) -> f64 {
        build_hamiltonian(cfg).entry(bond, bond + 1)
    }

    #[test]
    fn slope_examples() {
        assert_eq!(
            loglog_slope(&[(1.0, 1.0), (2.0, 0.5), (4.0, 0.25)]).unwrap(),
            -1.0
        );
        assert_eq!(loglog_slope(&[(1.0, 3.0), (10.0, 3.0)]).unwrap(), 0.0);
        assert!(loglog_slope(&[(2.0, 1.0), (2.0, 3.0)]).is_err());
        assert!(loglog_slope(&[(2.0, 1.0)]).is_err());
        assert!(loglog_slope(&[(2.0, -1.0), (3.0, 1.0)]).is_err());
    }

    #[test]
    fn weights_reflect_bond_amplitudes() {
        let cfg = ModelConfig::clean(5);
        for b in 0..5 {
            assert!(
                (bond_weight(&cfg, b) * 0.5 * cfg.j_coupling - bond_amplitude(&cfg, b)).abs()
                    < 1e-15
            );
        }
    }

    #[test]
    fn initial_current_is_zero_and_bonds_checked() {
        let cfg = ModelConfig::clean(4).with_gamma(1.0);
        let rho = evolve_lindblad_sector(&cfg, &TimeGrid::new(0.1, 1.0).unwrap()).unwrap();
        let j = current_series(&rho, &cfg, 0).unwrap();
        assert_eq!(j.values[0], 0.0);
        assert!(j.values[1] > 0.0);
        assert!(matches!(
            current_series(&rho, &cfg, 4),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn decoupled_qubit_carries_no_current() {
        let cfg = ModelConfig::clean(10).with_g(0.0).with_grid(0.05, 5.0);
        let scan = max_current_scan(
            &cfg,
            &[0, 1, 2, 3],
            &[10.0, 20.0],
            &IntegratorSettings::coarse(),
        )
        .unwrap();
        assert_eq!(scan.len(), 8);
        assert!(scan.iter().all(|p| p.max_current == 0.0));
    }

    #[test]
    fn short_horizon_is_rejected() {
        let cfg = ModelConfig::clean(10).with_grid(0.05, 5.0);
        let err = max_current_scan(&cfg, &[3], &[20.0], &IntegratorSettings::coarse()).unwrap_err();
        assert!(matches!(err, Error::HorizonTooShort { .. }));
    }

    #[test]
    fn arrival_interpolates() {
        let s = TimeSeries::from_rows(0.0, 1.0, vec![vec![0.0], vec![0.1], vec![0.3]]).unwrap();
        assert!((arrival_time(&s, 0, 0.2).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(arrival_time(&s, 0, 0.5), None);
    }
}
