use num_complex::Complex64;

use super::{build_dissipator_mask, SectorDensityMatrix};
use crate::error::{Error, Result};
use crate::model::{build_hamiltonian, ModelConfig};
use crate::series::{TimeGrid, TimeSeries};

const TRACE_DRIFT_LIMIT: f64 = 1e-9;
const POSITIVITY_LIMIT: f64 = -1e-6;

/// Fixed-step RK4 settings for the sector integrator.
///
/// The initial substep `h` is the largest value dividing the output step
/// with `h·2‖H‖ ≤ phase_step` and `h·4γ ≤ damping_step`. It is halved
/// (up to `max_halvings` times) whenever a run drifts in trace or loses
/// positivity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorSettings {
    pub phase_step: f64,
    pub damping_step: f64,
    pub max_halvings: u32,
    /// Check the minimum eigenvalue at every output sample.
    pub check_positivity: bool,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            phase_step: 0.01,
            damping_step: 0.25,
            max_halvings: 6,
            check_positivity: true,
        }
    }
}

impl IntegratorSettings {
    /// Looser stepping for long scans where 1e-6 accuracy is plenty.
    pub fn coarse() -> Self {
        Self {
            phase_step: 0.05,
            damping_step: 0.5,
            ..Self::default()
        }
    }
}

/// Diagnostics from an accepted run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunReport {
    pub substeps_per_sample: usize,
    pub substep: f64,
    pub halvings: u32,
    pub max_trace_drift: f64,
    pub min_eigenvalue: f64,
}

/// Tridiagonal generator `ρ ↦ −i[H, ρ] − D∘ρ` on a row-major buffer.
struct SectorGenerator {
    dim: usize,
    diag: Vec<f64>,
    off: Vec<f64>,
    damping: Vec<f64>,
}

impl SectorGenerator {
    fn new(cfg: &ModelConfig) -> Self {
        let h = build_hamiltonian(cfg);
        let mask = build_dissipator_mask(cfg);
        let dim = h.dim();
        let damping = (0..dim * dim)
            .map(|k| mask.damping[(k / dim, k % dim)])
            .collect();
        Self {
            dim,
            diag: h.diagonal(),
            off: h.off_diagonal(),
            damping,
        }
    }

    fn apply(&self, rho: &[Complex64], out: &mut [Complex64]) {
        let n = self.dim;
        let mi = Complex64::new(0.0, -1.0);
        for i in 0..n {
            for j in 0..n {
                let r = |a: usize, b: usize| rho[a * n + b];
                // (Hρ)_ij
                let mut hr = self.diag[i] * r(i, j);
                if i > 0 {
                    hr += self.off[i - 1] * r(i - 1, j);
                }
                if i + 1 < n {
                    hr += self.off[i] * r(i + 1, j);
                }
                // (ρH)_ij
                let mut rh = r(i, j) * self.diag[j];
                if j > 0 {
                    rh += r(i, j - 1) * self.off[j - 1];
                }
                if j + 1 < n {
                    rh += r(i, j + 1) * self.off[j];
                }
                out[i * n + j] = mi * (hr - rh) - self.damping[i * n + j] * r(i, j);
            }
        }
    }
}

struct Rk4 {
    gen: SectorGenerator,
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    tmp: Vec<Complex64>,
}

impl Rk4 {
    fn new(gen: SectorGenerator) -> Self {
        let len = gen.dim * gen.dim;
        let z = vec![Complex64::new(0.0, 0.0); len];
        Self {
            gen,
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            tmp: z,
        }
    }

    fn step(&mut self, rho: &mut [Complex64], h: f64) {
        let half = 0.5 * h;
        self.gen.apply(rho, &mut self.k1);
        for (t, (r, k)) in self.tmp.iter_mut().zip(rho.iter().zip(&self.k1)) {
            *t = r + half * k;
        }
        self.gen.apply(&self.tmp, &mut self.k2);
        for (t, (r, k)) in self.tmp.iter_mut().zip(rho.iter().zip(&self.k2)) {
            *t = r + half * k;
        }
        self.gen.apply(&self.tmp, &mut self.k3);
        for (t, (r, k)) in self.tmp.iter_mut().zip(rho.iter().zip(&self.k3)) {
            *t = r + h * k;
        }
        self.gen.apply(&self.tmp, &mut self.k4);
        let sixth = h / 6.0;
        for (idx, r) in rho.iter_mut().enumerate() {
            *r += sixth * (self.k1[idx] + 2.0 * self.k2[idx] + 2.0 * self.k3[idx] + self.k4[idx]);
        }
    }
}

fn initial_substeps(cfg: &ModelConfig, dt: f64, settings: &IntegratorSettings) -> usize {
    let freq = 2.0 * build_hamiltonian(cfg).spectral_bound();
    let mut h_max = dt;
    if freq > 0.0 {
        h_max = h_max.min(settings.phase_step / freq);
    }
    if cfg.gamma > 0.0 {
        h_max = h_max.min(settings.damping_step / (4.0 * cfg.gamma));
    }
    ((dt / h_max).ceil() as usize).max(1)
}

enum Attempt<T> {
    Accepted(Vec<T>, f64, f64),
    Rejected { t: f64, min_eigenvalue: f64 },
}

fn attempt<T, F>(
    cfg: &ModelConfig,
    grid: &TimeGrid,
    substeps: usize,
    settings: &IntegratorSettings,
    observe: &mut F,
) -> Attempt<T>
where
    F: FnMut(&SectorDensityMatrix) -> T,
{
    let dim = cfg.dim();
    let mut rk = Rk4::new(SectorGenerator::new(cfg));
    let mut rho = vec![Complex64::new(0.0, 0.0); dim * dim];
    rho[0] = Complex64::new(1.0, 0.0);
    let h = grid.dt / substeps as f64;

    let mut out = Vec::with_capacity(grid.len);
    let mut drift = 0.0f64;
    let mut min_eig = f64::INFINITY;
    for k in 0..grid.len {
        if k > 0 {
            for _ in 0..substeps {
                rk.step(&mut rho, h);
            }
        }
        let sample = SectorDensityMatrix::from_row_major(dim, &rho);
        let tr = sample.trace();
        let d = (tr - 1.0).norm();
        if !d.is_finite() || d > TRACE_DRIFT_LIMIT {
            return Attempt::Rejected {
                t: grid.time(k),
                min_eigenvalue: f64::NAN,
            };
        }
        drift = drift.max(d);
        if settings.check_positivity {
            let e = sample.min_eigenvalue();
            if e < POSITIVITY_LIMIT {
                return Attempt::Rejected {
                    t: grid.time(k),
                    min_eigenvalue: e,
                };
            }
            min_eig = min_eig.min(e);
        }
        out.push(observe(&sample));
    }
    Attempt::Accepted(out, drift, min_eig)
}

/// Integrates the sector Lindblad equation from `|e₀⟩⟨e₀|` and records
/// `observe(ρ(t))` at every grid point.
pub fn evolve_lindblad_sector_observed<T, F>(
    cfg: &ModelConfig,
    grid: &TimeGrid,
    settings: &IntegratorSettings,
    mut observe: F,
) -> Result<(TimeSeries<T>, RunReport)>
where
    F: FnMut(&SectorDensityMatrix) -> T,
{
    let mut substeps = initial_substeps(cfg, grid.dt, settings);
    let mut halvings = 0;
    loop {
        match attempt(cfg, grid, substeps, settings, &mut observe) {
            Attempt::Accepted(values, max_trace_drift, min_eigenvalue) => {
                let report = RunReport {
                    substeps_per_sample: substeps,
                    substep: grid.dt / substeps as f64,
                    halvings,
                    max_trace_drift,
                    min_eigenvalue,
                };
                return Ok((TimeSeries::on_grid(grid, values), report));
            }
            Attempt::Rejected { t, min_eigenvalue } => {
                if halvings >= settings.max_halvings {
                    return Err(Error::IntegratorInstability {
                        t,
                        min_eigenvalue,
                        halvings,
                    });
                }
                log::debug!("sector run rejected at t = {t}; halving step");
                halvings += 1;
                substeps *= 2;
            }
        }
    }
}

/// Full density-matrix trajectory with default settings.
pub fn evolve_lindblad_sector(
    cfg: &ModelConfig,
    grid: &TimeGrid,
) -> Result<TimeSeries<SectorDensityMatrix>> {
    evolve_lindblad_sector_observed(cfg, grid, &IntegratorSettings::default(), Clone::clone)
        .map(|(s, _)| s)
}

/// Qubit occupation `ρ₀₀(t)` along the sector trajectory.
pub fn lindblad_sector_n0(
    cfg: &ModelConfig,
    grid: &TimeGrid,
    settings: &IntegratorSettings,
) -> Result<TimeSeries<f64>> {
    evolve_lindblad_sector_observed(cfg, grid, settings, SectorDensityMatrix::qubit_population)
        .map(|(s, _)| s)
}
