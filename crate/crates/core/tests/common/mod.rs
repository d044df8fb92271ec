#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use qubit_probe::model::build_hamiltonian;
use qubit_probe::ModelConfig;

/// `e^{−iHt}` by dense matrix exponential.
pub fn propagator(h: &DMatrix<f64>, t: f64) -> DMatrix<Complex64> {
    h.map(|x| Complex64::new(0.0, -x * t)).exp()
}

/// `⟨1|e^{−iH_B τ}|1⟩` from the chain block.
pub fn correlation_oracle(cfg: &ModelConfig, tau: f64) -> Complex64 {
    let block = build_hamiltonian(cfg).chain_block();
    propagator(&block, tau)[(0, 0)]
}

/// `|⟨0|e^{−iHt}|0⟩|²` for the full sector matrix.
pub fn closed_n0_oracle(cfg: &ModelConfig, t: f64) -> f64 {
    let h = build_hamiltonian(cfg).matrix().clone();
    propagator(&h, t)[(0, 0)].norm_sqr()
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    // split first so oscillatory integrands are not under-resolved
    let pieces = ((b - a) / 0.25).ceil().max(1.0) as usize;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|k| {
            let (lo, hi) = (a + k as f64 * h, a + (k + 1) as f64 * h);
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
            simpson_step(&f, lo, hi, fa, fm, fb, whole, tol / pieces as f64, 40)
        })
        .sum()
}

/// Local maxima `(t, value)` of a sampled curve.
pub fn local_maxima(values: &[f64], t0: f64, dt: f64) -> Vec<(f64, f64)> {
    values
        .windows(3)
        .enumerate()
        .filter(|(_, w)| w[1] > w[0] && w[1] > w[2])
        .map(|(k, w)| (t0 + (k + 1) as f64 * dt, w[1]))
        .collect()
}
