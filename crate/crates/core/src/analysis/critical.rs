//! Critical dephasing strength: the smallest γ at which the qubit stops
//! bouncing back.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::bounce::{bounce_function, bounce_is_zero, BounceResult};
use super::lambert::lambert_w;
use crate::error::{Error, Result};
use crate::model::{chain_modes, ModelConfig};
use crate::open::{lindblad_sector_n0, tcl2_dephasing_n0, IntegratorSettings};
use crate::series::TimeGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaCMethod {
    NumericTcl2,
    NumericExact,
    SingleModeClosedForm,
}

impl GammaCMethod {
    pub fn label(&self) -> &'static str {
        match self {
            Self::NumericTcl2 => "numeric-tcl2",
            Self::NumericExact => "numeric-exact",
            Self::SingleModeClosedForm => "single-mode-closed-form",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaCEstimate {
    pub gamma_c: f64,
    pub method: GammaCMethod,
    pub n_sites: usize,
}

/// Bisection parameters for [`gamma_c_numeric`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaCSearch {
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
    /// Sampling step of the `n₀` series fed to the bounce function.
    pub dt: f64,
    /// Overrides the default horizon `max(200, 8/lo)`.
    pub horizon: Option<f64>,
    pub settings: IntegratorSettings,
}

impl Default for GammaCSearch {
    fn default() -> Self {
        Self {
            lo: 0.02,
            hi: 0.5,
            tol: 1e-3,
            dt: 0.01,
            horizon: None,
            settings: IntegratorSettings::coarse(),
        }
    }
}

/// `T = max(200, 8/γ_lower)`: the TCL2 transient decays as `e^{−2γt}`.
pub fn search_horizon(gamma_lower: f64) -> f64 {
    (8.0 / gamma_lower).max(200.0)
}

/// Bounce of `n₀(t)` at dephasing `gamma` using the chosen source.
pub fn bounce_for(
    template: &ModelConfig,
    gamma: f64,
    method: GammaCMethod,
    horizon: f64,
    dt: f64,
    settings: &IntegratorSettings,
) -> Result<BounceResult> {
    let cfg = template.clone().with_gamma(gamma);
    let grid = TimeGrid::new(dt, horizon)?;
    let n0 = match method {
        GammaCMethod::NumericTcl2 => tcl2_dephasing_n0(&chain_modes(&cfg), &cfg, &grid),
        GammaCMethod::NumericExact => lindblad_sector_n0(&cfg, &grid, settings)?,
        GammaCMethod::SingleModeClosedForm => {
            return Err(Error::InvalidArgument(
                "closed form has no time series".into(),
            ))
        }
    };
    let b = bounce_function(&n0, None)?;
    Ok(if gamma == 0.0 { b.capped() } else { b })
}

/// Bisection on γ for the zero-bounce predicate.
pub fn gamma_c_numeric(
    template: &ModelConfig,
    method: GammaCMethod,
    search: &GammaCSearch,
) -> Result<GammaCEstimate> {
    if method == GammaCMethod::SingleModeClosedForm {
        return gamma_c_single_mode(template.n_sites, template.j_coupling);
    }
    if !(search.lo > 0.0 && search.hi > search.lo && search.tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "bad bracket [{}, {}] with tol {}",
            search.lo, search.hi, search.tol
        )));
    }
    let horizon = search.horizon.unwrap_or_else(|| search_horizon(search.lo));
    let zero_at = |gamma: f64| -> Result<bool> {
        let b = bounce_for(
            template,
            gamma,
            method,
            horizon,
            search.dt,
            &search.settings,
        )?;
        log::debug!(
            "{} N={} gamma={gamma:.6} B={:.3e}",
            method.label(),
            template.n_sites,
            b.value()
        );
        Ok(bounce_is_zero(&b))
    };

    let (mut lo, mut hi) = (search.lo, search.hi);
    match (zero_at(lo)?, zero_at(hi)?) {
        (false, true) => {}
        (true, true) => {
            return Err(Error::BracketFailure {
                lo,
                hi,
                state: "zero",
            })
        }
        (_, false) => {
            return Err(Error::BracketFailure {
                lo,
                hi,
                state: "nonzero",
            })
        }
    }
    while hi - lo >= search.tol {
        let mid = 0.5 * (lo + hi);
        if zero_at(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(GammaCEstimate {
        gamma_c: 0.5 * (lo + hi),
        method,
        n_sites: template.n_sites,
    })
}

/// Dominant-mode estimate `γ_c ≈ J W(3π/2)/(3π) · sin(π/(2(N+1)))`, which
/// tends to `0.862/(N+1)` for long chains. Derived for even `N`.
pub fn gamma_c_single_mode(n_sites: usize, j_coupling: f64) -> Result<GammaCEstimate> {
    if n_sites == 0 {
        return Err(Error::InvalidArgument("n_sites must be at least 1".into()));
    }
    if n_sites % 2 == 1 {
        log::warn!("single-mode gamma_c estimate assumes even N, got N = {n_sites}");
    }
    let w = lambert_w(1.5 * PI)?;
    let gamma_c = j_coupling * w / (3.0 * PI) * (PI / (2.0 * (n_sites + 1) as f64)).sin();
    Ok(GammaCEstimate {
        gamma_c,
        method: GammaCMethod::SingleModeClosedForm,
        n_sites,
    })
}
