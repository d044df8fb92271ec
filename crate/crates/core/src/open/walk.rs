//! Classical nearest-neighbour walk that strong dephasing reduces the
//! sector dynamics to: `dp_m/dt = Σ_bonds r (p_neighbour − p_m)` with
//! reflecting ends.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::model::ModelConfig;
use crate::series::{TimeGrid, TimeSeries};

/// Bond rates: `hop_rate` on chain bonds, scaled by `(g/(J/2))²` on the
/// qubit bond.
fn bond_rates(cfg: &ModelConfig, hop_rate: f64) -> Result<Vec<f64>> {
    if hop_rate.is_nan() || hop_rate <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "hop_rate must be positive, got {hop_rate}"
        )));
    }
    if cfg.j_coupling == 0.0 {
        return Err(Error::InvalidArgument(
            "classical walk needs a nonzero chain coupling".into(),
        ));
    }
    let ratio = cfg.g_coupling / (0.5 * cfg.j_coupling);
    let mut rates = vec![hop_rate; cfg.n_sites];
    rates[0] = hop_rate * ratio * ratio;
    Ok(rates)
}

fn generator(rates: &[f64]) -> DMatrix<f64> {
    let dim = rates.len() + 1;
    let mut g = DMatrix::zeros(dim, dim);
    for (b, &r) in rates.iter().enumerate() {
        g[(b, b + 1)] += r;
        g[(b + 1, b)] += r;
        g[(b, b)] -= r;
        g[(b + 1, b + 1)] -= r;
    }
    g
}

/// Site populations (qubit first) of the walk started from the qubit. The
/// generator is symmetric, so it is propagated exactly through its
/// eigendecomposition.
pub fn classical_walk_evolve(
    cfg: &ModelConfig,
    hop_rate: f64,
    grid: &TimeGrid,
) -> Result<TimeSeries<Vec<f64>>> {
    let rates = bond_rates(cfg, hop_rate)?;
    let eig = SymmetricEigen::new(generator(&rates));
    let dim = cfg.dim();
    let v = &eig.eigenvectors;
    let rows = grid
        .times()
        .map(|t| {
            let coeffs = DVector::from_fn(dim, |q, _| v[(0, q)] * (eig.eigenvalues[q] * t).exp());
            let p = v * coeffs;
            p.iter().copied().collect()
        })
        .collect();
    TimeSeries::from_rows(grid.t0, grid.dt, rows)
}

/// Sum of squared population differences between the walk and `target`.
pub fn population_misfit(
    cfg: &ModelConfig,
    hop_rate: f64,
    target: &TimeSeries<Vec<f64>>,
) -> Result<f64> {
    let walk = classical_walk_evolve(cfg, hop_rate, &target.grid())?;
    Ok(walk
        .values
        .iter()
        .zip(&target.values)
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)))
        .sum())
}

/// Least-squares hop rate against a population series on the same chain.
/// Coarse logarithmic scan over `[1e-6, 1e3]` followed by golden-section
/// refinement in `ln(rate)`.
pub fn fit_hop_rate(cfg: &ModelConfig, target: &TimeSeries<Vec<f64>>) -> Result<f64> {
    if target.width() != cfg.dim() {
        return Err(Error::InvalidArgument(format!(
            "target has {} sites, config has {}",
            target.width(),
            cfg.dim()
        )));
    }
    let cost = |ln_rate: f64| population_misfit(cfg, ln_rate.exp(), target);
    let (lo, hi) = (1e-6f64.ln(), 1e3f64.ln());
    let points: usize = 91;
    let step = (hi - lo) / (points - 1) as f64;
    let mut best = (0usize, f64::INFINITY);
    for k in 0..points {
        let c = cost(lo + k as f64 * step)?;
        if c < best.1 {
            best = (k, c);
        }
    }
    let mut a = lo + best.0.saturating_sub(1) as f64 * step;
    let mut b = lo + (best.0 + 1).min(points - 1) as f64 * step;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (cost(x1)?, cost(x2)?);
    while b - a > 1e-9 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = cost(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = cost(x2)?;
        }
    }
    Ok((0.5 * (a + b)).exp())
}
