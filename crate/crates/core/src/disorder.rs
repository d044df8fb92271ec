//! Random on-site fields and disorder-ensemble averages of `n₀(t)`.
//!
//! Fields come from a ChaCha8 keystream addressed by `(seed, realization,
//! site)`: the stream id is the realization index and each site reads its
//! own 64-bit word, so any realization can be regenerated in isolation and
//! ensembles are independent of evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed::{exact_closed_n0, tcl2_closed_exponent, tcl2_closed_n0};
use crate::error::{Error, Result};
use crate::model::{chain_modes, validate_config, ModelConfig};
use crate::series::{TimeGrid, TimeSeries};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisorderSpec {
    /// Fields are uniform on `[−width, width]`.
    pub width: f64,
    pub n_realizations: usize,
    pub seed: u64,
}

impl DisorderSpec {
    pub fn new(width: f64, n_realizations: usize, seed: u64) -> Result<Self> {
        if !width.is_finite() || width < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "disorder width must be nonnegative, got {width}"
            )));
        }
        if n_realizations == 0 {
            return Err(Error::InvalidArgument(
                "n_realizations must be at least 1".into(),
            ));
        }
        Ok(Self {
            width,
            n_realizations,
            seed,
        })
    }
}

/// How each realization's `n₀(t)` is produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DisorderEngine {
    /// Exact single-excitation evolution per realization, then averaged.
    ExactClosed,
    /// TCL2 solution per realization, then averaged.
    Tcl2Closed,
    /// Average the TCL2 kernel over realizations, then solve once.
    Tcl2AveragedKernel,
}

/// i.i.d. uniform fields on `[−W, W]` for one realization.
pub fn sample_fields(
    spec: &DisorderSpec,
    n_sites: usize,
    realization_index: usize,
) -> Result<Vec<f64>> {
    if realization_index >= spec.n_realizations {
        return Err(Error::IndexOutOfRange {
            index: realization_index,
            limit: spec.n_realizations,
        });
    }
    if spec.width == 0.0 {
        return Ok(vec![0.0; n_sites]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(realization_index as u64);
    Ok((0..n_sites)
        .map(|site| {
            // two 32-bit words per site
            rng.set_word_pos(2 * site as u128);
            let u: f64 = rng.random();
            spec.width * (2.0 * u - 1.0)
        })
        .collect())
}

/// Pointwise ensemble mean and its standard error.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleAverage {
    pub mean: TimeSeries<f64>,
    pub stderr: TimeSeries<f64>,
}

fn realization_config(
    template: &ModelConfig,
    spec: &DisorderSpec,
    index: usize,
) -> Result<ModelConfig> {
    let fields = sample_fields(spec, template.n_sites, index)?;
    validate_config(template.clone().with_fields(fields))
}

/// Per-realization `n₀(t)` series, ordered by realization index.
pub fn ensemble_trajectories(
    template: &ModelConfig,
    spec: &DisorderSpec,
    engine: DisorderEngine,
    grid: &TimeGrid,
) -> Result<Vec<TimeSeries<f64>>> {
    (0..spec.n_realizations)
        .into_par_iter()
        .map(|index| {
            let cfg =
                realization_config(template, spec, index).map_err(|e| Error::Realization {
                    index,
                    source: Box::new(e),
                })?;
            Ok(match engine {
                DisorderEngine::ExactClosed => exact_closed_n0(&cfg, grid),
                DisorderEngine::Tcl2Closed => tcl2_closed_n0(&chain_modes(&cfg), &cfg, grid),
                DisorderEngine::Tcl2AveragedKernel => {
                    let modes = chain_modes(&cfg);
                    let values = grid
                        .times()
                        .map(|t| tcl2_closed_exponent(&modes, &cfg, t))
                        .collect();
                    TimeSeries::on_grid(grid, values)
                }
            })
        })
        .collect()
}

/// Disorder average of `n₀(t)` for a closed chain.
pub fn ensemble_average_n0(
    template: &ModelConfig,
    spec: &DisorderSpec,
    engine: DisorderEngine,
    grid: &TimeGrid,
) -> Result<EnsembleAverage> {
    if template.gamma != 0.0 {
        return Err(Error::InvalidArgument(format!(
            "disorder ensembles use the closed chain; got gamma = {}",
            template.gamma
        )));
    }
    if spec.width == 0.0 {
        // every realization is the clean chain
        let single = DisorderSpec {
            n_realizations: 1,
            ..*spec
        };
        let runs = ensemble_trajectories(template, &single, engine, grid)?;
        let mean = match engine {
            DisorderEngine::Tcl2AveragedKernel => runs[0].map(|e| (-e).exp()),
            _ => runs[0].clone(),
        };
        let stderr = mean.map(|_| 0.0);
        return Ok(EnsembleAverage { mean, stderr });
    }
    let runs = ensemble_trajectories(template, spec, engine, grid)?;
    if engine == DisorderEngine::Tcl2AveragedKernel {
        // the kernel is linear in the correlation, so averaging it averages
        // the exponent
        let (mean_exp, _) = mean_and_stderr(&runs, grid.len);
        let mean = mean_exp.iter().map(|e| (-e).exp()).collect();
        return Ok(EnsembleAverage {
            mean: TimeSeries::on_grid(grid, mean),
            stderr: TimeSeries::on_grid(grid, vec![0.0; grid.len]),
        });
    }
    let (mean, stderr) = mean_and_stderr(&runs, grid.len);
    Ok(EnsembleAverage {
        mean: TimeSeries::on_grid(grid, mean),
        stderr: TimeSeries::on_grid(grid, stderr),
    })
}

/// Sequential reduction in realization order; standard error uses the
/// unbiased variance and is 0 for a single realization.
fn mean_and_stderr(runs: &[TimeSeries<f64>], len: usize) -> (Vec<f64>, Vec<f64>) {
    let n = runs.len() as f64;
    let mut mean = vec![0.0; len];
    for run in runs {
        for (m, v) in mean.iter_mut().zip(&run.values) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    if runs.len() < 2 {
        return (mean, vec![0.0; len]);
    }
    let mut var = vec![0.0; len];
    for run in runs {
        for ((s, v), m) in var.iter_mut().zip(&run.values).zip(&mean) {
            *s += (v - m).powi(2);
        }
    }
    let stderr = var.iter().map(|s| (s / (n - 1.0) / n).sqrt()).collect();
    (mean, stderr)
}
