//! Chain dephasing: Lindblad dynamics restricted to the single-excitation
//! sector, a brute-force full-space oracle, the dephasing TCL2 rate and the
//! strong-dephasing classical walk.

mod full;
mod sector;
mod tcl2;
mod walk;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::closed::SectorWaveFunction;
use crate::model::ModelConfig;

pub use full::{evolve_lindblad_full, full_liouvillian, FULL_MAX_SITES};
pub use sector::{
    evolve_lindblad_sector, evolve_lindblad_sector_observed, lindblad_sector_n0,
    IntegratorSettings, RunReport,
};
pub use tcl2::{
    tcl2_dephasing_exponent, tcl2_dephasing_n0, tcl2_dephasing_rate, tcl2_dephasing_rate_limit,
};
pub use walk::{classical_walk_evolve, fit_hop_rate, population_misfit};

/// Density matrix on the (N+1)-dimensional single-excitation sector.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorDensityMatrix {
    pub entries: DMatrix<Complex64>,
}

impl SectorDensityMatrix {
    /// `|e₀⟩⟨e₀|`: qubit excited, chain empty.
    pub fn initial(dim: usize) -> Self {
        let mut entries = DMatrix::zeros(dim, dim);
        entries[(0, 0)] = Complex64::new(1.0, 0.0);
        Self { entries }
    }

    pub fn from_pure(psi: &SectorWaveFunction) -> Self {
        let dim = psi.amplitudes.len();
        let entries = DMatrix::from_fn(dim, dim, |i, j| {
            psi.amplitudes[i] * psi.amplitudes[j].conj()
        });
        Self { entries }
    }

    pub(crate) fn from_row_major(dim: usize, data: &[Complex64]) -> Self {
        Self {
            entries: DMatrix::from_row_slice(dim, dim, data),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn qubit_population(&self) -> f64 {
        self.entries[(0, 0)].re
    }

    pub fn populations(&self) -> Vec<f64> {
        self.entries.diagonal().iter().map(|z| z.re).collect()
    }

    /// `max |ρ − ρ†|` entrywise.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.entries + self.entries.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Complex conjugate of every entry (time-reversed coherences).
    pub fn conjugate(&self) -> Self {
        Self {
            entries: self.entries.map(|z| z.conj()),
        }
    }
}

/// Entrywise coherence damping produced by σᶻ dephasing on the chain sites.
#[derive(Clone, Debug, PartialEq)]
pub struct DissipatorMask {
    pub damping: DMatrix<f64>,
}

/// Pure dephasing `γ Σ_i (σᶻ_i ρ σᶻ_i − ρ)` over chain sites only, restricted
/// to the sector: populations are untouched, qubit–site coherences decay at
/// 2γ and site–site coherences at 4γ.
pub fn build_dissipator_mask(cfg: &ModelConfig) -> DissipatorMask {
    let dim = cfg.dim();
    let g = cfg.gamma;
    let damping = DMatrix::from_fn(dim, dim, |m, n| match (m, n) {
        _ if m == n => 0.0,
        (0, _) | (_, 0) => 2.0 * g,
        _ => 4.0 * g,
    });
    DissipatorMask { damping }
}
