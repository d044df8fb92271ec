//! Closed qubit + chain: exact single-excitation Schrödinger evolution and
//! the second-order time-convolutionless (TCL2) rate equation for the qubit
//! population.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use crate::model::{build_hamiltonian, ModeDecomposition, ModelConfig};
use crate::series::{TimeGrid, TimeSeries};

/// Below this detuning `sin(xt)/x` is replaced by its limit `t`.
pub const REMOVABLE_THRESHOLD: f64 = 1e-12;

/// Amplitudes over the sector basis (index 0 = qubit).
#[derive(Clone, Debug, PartialEq)]
pub struct SectorWaveFunction {
    pub amplitudes: Vec<Complex64>,
}

impl SectorWaveFunction {
    /// Qubit up, chain empty.
    pub fn initial(dim: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn qubit_population(&self) -> f64 {
        self.amplitudes[0].norm_sqr()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// `ψ(t) = e^{−iHt} ψ(0)` from one eigendecomposition of the sector
/// Hamiltonian, so there is no time-stepping error.
pub fn evolve_closed(cfg: &ModelConfig, grid: &TimeGrid) -> TimeSeries<SectorWaveFunction> {
    if cfg.gamma != 0.0 {
        log::warn!("evolve_closed ignores gamma = {}", cfg.gamma);
    }
    let h = build_hamiltonian(cfg);
    let dim = h.dim();
    let eig = SymmetricEigen::new(h.matrix().clone());
    let vecs = &eig.eigenvectors;
    // overlap of each eigenvector with the initial state |0⟩
    let overlaps: Vec<f64> = (0..dim).map(|q| vecs[(0, q)]).collect();

    let values = grid
        .times()
        .map(|t| {
            let phases: Vec<Complex64> = (0..dim)
                .map(|q| overlaps[q] * Complex64::from_polar(1.0, -eig.eigenvalues[q] * t))
                .collect();
            let amplitudes = (0..dim)
                .map(|j| (0..dim).map(|q| vecs[(j, q)] * phases[q]).sum())
                .collect();
            SectorWaveFunction { amplitudes }
        })
        .collect();
    TimeSeries::on_grid(grid, values)
}

/// `n₀(t) = |a₀(t)|²`.
pub fn qubit_occupation(series: &TimeSeries<SectorWaveFunction>) -> TimeSeries<f64> {
    series.map(SectorWaveFunction::qubit_population)
}

/// Convenience: exact closed-chain `n₀(t)` on a grid.
pub fn exact_closed_n0(cfg: &ModelConfig, grid: &TimeGrid) -> TimeSeries<f64> {
    qubit_occupation(&evolve_closed(cfg, grid))
}

/// Detuning of mode `q` from the qubit. With zero fields the band is
/// symmetric and the sign convention is immaterial.
pub(crate) fn detuning(energy: f64, omega0: f64) -> f64 {
    energy - omega0
}

/// TCL2 decay rate `λ(t) = 2g² Σ_q w_q sin(x_q t)/x_q`, with `x_q` the
/// detuning of mode `q` from the qubit.
pub fn tcl2_closed_rate(modes: &ModeDecomposition, cfg: &ModelConfig, t: f64) -> f64 {
    let g2 = cfg.g_coupling * cfg.g_coupling;
    let sum: f64 = modes
        .iter()
        .map(|(e, w)| {
            let x = detuning(e, cfg.omega0);
            if x.abs() < REMOVABLE_THRESHOLD {
                w * t
            } else {
                w * (x * t).sin() / x
            }
        })
        .sum();
    2.0 * g2 * sum
}

/// `∫₀ᵗ λ(s) ds = 2g² Σ_q w_q (1 − cos x_q t)/x_q²`, evaluated as
/// `2 sin²(x t/2)/x²` to avoid cancellation at small detuning.
pub fn tcl2_closed_exponent(modes: &ModeDecomposition, cfg: &ModelConfig, t: f64) -> f64 {
    let g2 = cfg.g_coupling * cfg.g_coupling;
    let sum: f64 = modes
        .iter()
        .map(|(e, w)| {
            let x = detuning(e, cfg.omega0);
            if x.abs() < REMOVABLE_THRESHOLD {
                w * 0.5 * t * t
            } else {
                let s = (0.5 * x * t).sin();
                w * 2.0 * s * s / (x * x)
            }
        })
        .sum();
    2.0 * g2 * sum
}

/// `n₀(t) = exp(−∫₀ᵗ λ)` from the closed-form antiderivative.
pub fn tcl2_closed_n0(
    modes: &ModeDecomposition,
    cfg: &ModelConfig,
    grid: &TimeGrid,
) -> TimeSeries<f64> {
    let values = grid
        .times()
        .map(|t| (-tcl2_closed_exponent(modes, cfg, t)).exp())
        .collect();
    TimeSeries::on_grid(grid, values)
}
