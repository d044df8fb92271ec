//! Brute-force oracle: the complete 2^(N+1)-dimensional Hilbert space with
//! Pauli dephasing on every chain spin, vectorized into a dense
//! 4^(N+1) Liouvillian and propagated by its matrix exponential.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ModelConfig;
use crate::series::{TimeGrid, TimeSeries};

/// Largest chain length the oracle accepts.
pub const FULL_MAX_SITES: usize = 3;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Single-spin operator `op` on spin `site` of `n_spins`; spin 0 is the
/// most significant tensor factor.
fn embed(op: &DMatrix<Complex64>, site: usize, n_spins: usize) -> DMatrix<Complex64> {
    let id = DMatrix::<Complex64>::identity(2, 2);
    (0..n_spins).fold(DMatrix::identity(1, 1), |acc, k| {
        acc.kronecker(if k == site { op } else { &id })
    })
}

fn full_hamiltonian(cfg: &ModelConfig) -> DMatrix<Complex64> {
    let spins = cfg.n_sites + 1;
    // basis |0⟩ = down, |1⟩ = up
    let raise = DMatrix::from_row_slice(2, 2, &[c(0.0), c(0.0), c(1.0), c(0.0)]);
    let lower = raise.transpose();
    let sz = DMatrix::from_row_slice(2, 2, &[c(-0.5), c(0.0), c(0.0), c(0.5)]);
    let sp: Vec<_> = (0..spins).map(|k| embed(&raise, k, spins)).collect();
    let sm: Vec<_> = (0..spins).map(|k| embed(&lower, k, spins)).collect();

    let mut h = &sp[0] * &sm[0] * c(cfg.omega0);
    h += (&sp[0] * &sm[1] + &sm[0] * &sp[1]) * c(cfg.g_coupling);
    for i in 1..cfg.n_sites {
        // J(SˣSˣ + SʸSʸ) = (J/2)(S⁺S⁻ + S⁻S⁺)
        h += (&sp[i] * &sm[i + 1] + &sm[i] * &sp[i + 1]) * c(0.5 * cfg.j_coupling);
    }
    for (i, &field) in cfg.fields.iter().enumerate() {
        h += embed(&sz, i + 1, spins) * c(field);
    }
    h
}

/// Row-major vectorized Liouvillian of `−i[H, ρ] + γ Σ_i (σᶻ_i ρ σᶻ_i − ρ)`
/// with the sum over chain spins. Uses `vec(AρB) = (A ⊗ Bᵀ) vec(ρ)`.
pub fn full_liouvillian(cfg: &ModelConfig) -> Result<DMatrix<Complex64>> {
    if cfg.n_sites > FULL_MAX_SITES {
        return Err(Error::Dimension {
            max: FULL_MAX_SITES,
            got: cfg.n_sites,
        });
    }
    let spins = cfg.n_sites + 1;
    let dim = 1usize << spins;
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let h = full_hamiltonian(cfg);
    let mut l = (h.kronecker(&id) - id.kronecker(&h.transpose())) * Complex64::new(0.0, -1.0);
    if cfg.gamma > 0.0 {
        let pz = DMatrix::from_row_slice(2, 2, &[c(-1.0), c(0.0), c(0.0), c(1.0)]);
        let big_id = DMatrix::<Complex64>::identity(dim * dim, dim * dim);
        for site in 1..spins {
            let z = embed(&pz, site, spins);
            l += (z.kronecker(&z.transpose()) - &big_id) * c(cfg.gamma);
        }
    }
    Ok(l)
}

/// Qubit occupation `⟨σ⁺_s σ⁻_s⟩(t)` from the full-space Lindblad equation.
pub fn evolve_lindblad_full(cfg: &ModelConfig, grid: &TimeGrid) -> Result<TimeSeries<f64>> {
    let l = full_liouvillian(cfg)?;
    let spins = cfg.n_sites + 1;
    let dim = 1usize << spins;
    let step = (l * c(grid.dt)).exp();

    // qubit up (most significant bit), chain down
    let start = 1usize << (spins - 1);
    let mut rho = DVector::<Complex64>::zeros(dim * dim);
    rho[start * dim + start] = c(1.0);

    let qubit_up: Vec<usize> = (0..dim).filter(|s| s & start != 0).collect();
    let mut values = Vec::with_capacity(grid.len);
    for k in 0..grid.len {
        if k > 0 {
            rho = &step * &rho;
        }
        values.push(qubit_up.iter().map(|&s| rho[s * dim + s].re).sum());
    }
    Ok(TimeSeries::on_grid(grid, values))
}
