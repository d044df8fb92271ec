//! TCL2 rate for the qubit population when the chain dephases. Qubit–chain
//! coherences decay at 2γ, which turns the closed kernel `cos(xτ)` into
//! `e^{−2γτ} cos(xτ)`.

use num_complex::Complex64;

use crate::closed::{detuning, tcl2_closed_exponent, tcl2_closed_rate};
use crate::model::{ModeDecomposition, ModelConfig};
use crate::series::{TimeGrid, TimeSeries};

/// Below this value of `|z|·t` the Taylor series is used.
const SERIES_THRESHOLD: f64 = 0.5;
const SERIES_TERMS: i32 = 24;

/// `z = −2γ + i x`.
fn kernel_exponent(x: f64, gamma: f64) -> Complex64 {
    Complex64::new(-2.0 * gamma, x)
}

/// `Σ_k Re(zᵏ) t^{k+p}/(k+p)!`, the `p`-fold integral of `Re e^{zs}`.
fn taylor(z: Complex64, t: f64, p: i32) -> f64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut fact: f64 = (1..=p).map(f64::from).product();
    let mut sum = 0.0;
    for k in 0..SERIES_TERMS {
        sum += term.re * t.powi(k + p) / fact;
        term *= z;
        fact *= f64::from(k + p + 1);
    }
    sum
}

/// `∫₀ᵗ e^{−2γs} cos(xs) ds`.
fn mode_rate(x: f64, gamma: f64, t: f64) -> f64 {
    let z = kernel_exponent(x, gamma);
    if z.norm() * t < SERIES_THRESHOLD {
        return taylor(z, t, 1);
    }
    rate_closed_form(x, gamma, t)
}

fn rate_closed_form(x: f64, gamma: f64, t: f64) -> f64 {
    let a = 2.0 * gamma;
    let decay = (-a * t).exp();
    (decay * (-a * (x * t).cos() + x * (x * t).sin()) + a) / (x * x + a * a)
}

/// `∫₀ᵗ ∫₀ˢ e^{−2γu} cos(xu) du ds`.
fn mode_exponent(x: f64, gamma: f64, t: f64) -> f64 {
    let z = kernel_exponent(x, gamma);
    if z.norm() * t < SERIES_THRESHOLD {
        return taylor(z, t, 2);
    }
    exponent_closed_form(z, t)
}

fn exponent_closed_form(z: Complex64, t: f64) -> f64 {
    // integrand is Re[z̄ e^{zs}]/|z|² + 2γ/|z|²
    let a = -z.re;
    let growth = (z * t).exp() - 1.0;
    ((z.conj() / z * growth).re + a * t) / z.norm_sqr()
}

/// `λ_γ(t) = 2g² Σ_q w_q [e^{−2γt}(−2γ cos x_q t + x_q sin x_q t) + 2γ] / (x_q² + 4γ²)`.
pub fn tcl2_dephasing_rate(modes: &ModeDecomposition, cfg: &ModelConfig, t: f64) -> f64 {
    if cfg.gamma == 0.0 {
        return tcl2_closed_rate(modes, cfg, t);
    }
    let sum: f64 = modes
        .iter()
        .map(|(e, w)| w * mode_rate(detuning(e, cfg.omega0), cfg.gamma, t))
        .sum();
    2.0 * cfg.g_coupling.powi(2) * sum
}

/// `λ_γ(∞) = 2g² Σ_q w_q 2γ/(x_q² + 4γ²)`. Infinite for γ = 0 with a resonant
/// mode.
pub fn tcl2_dephasing_rate_limit(modes: &ModeDecomposition, cfg: &ModelConfig) -> f64 {
    let a = 2.0 * cfg.gamma;
    let sum: f64 = modes
        .iter()
        .map(|(e, w)| {
            let x = detuning(e, cfg.omega0);
            w * a / (x * x + a * a)
        })
        .sum();
    2.0 * cfg.g_coupling.powi(2) * sum
}

/// `∫₀ᵗ λ_γ(s) ds` in closed form.
pub fn tcl2_dephasing_exponent(modes: &ModeDecomposition, cfg: &ModelConfig, t: f64) -> f64 {
    if cfg.gamma == 0.0 {
        return tcl2_closed_exponent(modes, cfg, t);
    }
    let sum: f64 = modes
        .iter()
        .map(|(e, w)| w * mode_exponent(detuning(e, cfg.omega0), cfg.gamma, t))
        .sum();
    2.0 * cfg.g_coupling.powi(2) * sum
}

/// `n₀(t) = exp(−∫₀ᵗ λ_γ)`.
pub fn tcl2_dephasing_n0(
    modes: &ModeDecomposition,
    cfg: &ModelConfig,
    grid: &TimeGrid,
) -> TimeSeries<f64> {
    let values = grid
        .times()
        .map(|t| (-tcl2_dephasing_exponent(modes, cfg, t)).exp())
        .collect();
    TimeSeries::on_grid(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed::tcl2_closed_n0;
    use crate::model::chain_modes;

    #[test]
    fn vanishes_at_zero_time() {
        let cfg = ModelConfig::clean(10).with_gamma(0.7);
        let modes = chain_modes(&cfg);
        assert_eq!(tcl2_dephasing_rate(&modes, &cfg, 0.0), 0.0);
        assert_eq!(tcl2_dephasing_exponent(&modes, &cfg, 0.0), 0.0);
    }

    #[test]
    fn small_gamma_approaches_closed_rate() {
        let cfg = ModelConfig::clean(10).with_omega0(0.1);
        let modes = chain_modes(&cfg);
        let tiny = cfg.clone().with_gamma(1e-13);
        for t in [0.001, 0.5, 3.0, 17.0, 40.0] {
            let a = tcl2_dephasing_rate(&modes, &tiny, t);
            let b = tcl2_closed_rate(&modes, &cfg, t);
            assert!((a - b).abs() < 1e-10, "t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn gamma_zero_n0_identical_to_closed() {
        let cfg = ModelConfig::clean(8);
        let modes = chain_modes(&cfg);
        let grid = TimeGrid::new(0.1, 30.0).unwrap();
        assert_eq!(
            tcl2_dephasing_n0(&modes, &cfg, &grid),
            tcl2_closed_n0(&modes, &cfg, &grid)
        );
    }

    #[test]
    fn series_branch_is_continuous() {
        for (x, gamma) in [(0.0, 0.3), (0.4, 0.0), (0.2, 0.1), (-3.0, 0.05)] {
            let z = kernel_exponent(x, gamma);
            let t = SERIES_THRESHOLD / z.norm();
            let (series, closed) = (taylor(z, t, 2), exponent_closed_form(z, t));
            assert!((series - closed).abs() <= 1e-13 * closed.abs());
            let (series, closed) = (taylor(z, t, 1), rate_closed_form(x, gamma, t));
            assert!((series - closed).abs() <= 1e-13 * closed.abs());
        }
    }

    #[test]
    fn long_time_rate_is_positive_limit() {
        let cfg = ModelConfig::clean(10).with_gamma(2.0);
        let modes = chain_modes(&cfg);
        let lim = tcl2_dephasing_rate_limit(&modes, &cfg);
        assert!(lim > 0.0);
        assert!((tcl2_dephasing_rate(&modes, &cfg, 50.0) - lim).abs() < 1e-12);
    }
}
