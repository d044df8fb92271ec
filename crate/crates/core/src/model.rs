//! Physical configuration of the probe qubit + XX chain, the
//! single-excitation Hamiltonian and the chain's eigenmodes.
//!
//! Index convention in the single-excitation sector: 0 is the qubit,
//! `1..=N` are chain sites. The qubit couples to site 1 only.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeGrid;

/// All physical and grid parameters of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModelConfig", into = "RawModelConfig")]
pub struct ModelConfig {
    pub n_sites: usize,
    pub j_coupling: f64,
    pub g_coupling: f64,
    pub omega0: f64,
    pub gamma: f64,
    /// On-site fields `h_i`, one per chain site.
    pub fields: Vec<f64>,
    pub time_step: f64,
    pub t_max: f64,
}

/// Flat key-value form used in config files. `fields` may be omitted, in
/// which case the chain is clean.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModelConfig {
    n: usize,
    j: f64,
    g: f64,
    omega0: f64,
    gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fields: Option<Vec<f64>>,
    dt: f64,
    t_max: f64,
}

impl TryFrom<RawModelConfig> for ModelConfig {
    type Error = Error;

    fn try_from(raw: RawModelConfig) -> Result<Self> {
        let cfg = ModelConfig {
            n_sites: raw.n,
            j_coupling: raw.j,
            g_coupling: raw.g,
            omega0: raw.omega0,
            gamma: raw.gamma,
            fields: raw.fields.unwrap_or_else(|| vec![0.0; raw.n]),
            time_step: raw.dt,
            t_max: raw.t_max,
        };
        validate_config(cfg)
    }
}

impl From<ModelConfig> for RawModelConfig {
    fn from(cfg: ModelConfig) -> Self {
        RawModelConfig {
            n: cfg.n_sites,
            j: cfg.j_coupling,
            g: cfg.g_coupling,
            omega0: cfg.omega0,
            gamma: cfg.gamma,
            fields: Some(cfg.fields),
            dt: cfg.time_step,
            t_max: cfg.t_max,
        }
    }
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self::clean(10)
    }
}

impl ModelConfig {
    /// Clean chain with the reference couplings J = 4, g = 0.2, ω₀ = 0,
    /// no dephasing, dt = 0.01 and t_max = 60.
    pub fn clean(n_sites: usize) -> Self {
        Self {
            n_sites,
            j_coupling: 4.0,
            g_coupling: 0.2,
            omega0: 0.0,
            gamma: 0.0,
            fields: vec![0.0; n_sites],
            time_step: 0.01,
            t_max: 60.0,
        }
    }

    /// Resizes the chain; fields are reset to zero.
    pub fn with_n(mut self, n_sites: usize) -> Self {
        self.n_sites = n_sites;
        self.fields = vec![0.0; n_sites];
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_omega0(mut self, omega0: f64) -> Self {
        self.omega0 = omega0;
        self
    }

    pub fn with_g(mut self, g: f64) -> Self {
        self.g_coupling = g;
        self
    }

    pub fn with_fields(mut self, fields: Vec<f64>) -> Self {
        self.fields = fields;
        self
    }

    pub fn with_grid(mut self, time_step: f64, t_max: f64) -> Self {
        self.time_step = time_step;
        self.t_max = t_max;
        self
    }

    /// Sector dimension N + 1.
    pub fn dim(&self) -> usize {
        self.n_sites + 1
    }

    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.time_step, self.t_max)
    }
}

/// Checks every configuration invariant and hands the config back.
pub fn validate_config(cfg: ModelConfig) -> Result<ModelConfig> {
    let finite = [
        ("j_coupling", cfg.j_coupling),
        ("g_coupling", cfg.g_coupling),
        ("omega0", cfg.omega0),
        ("gamma", cfg.gamma),
        ("time_step", cfg.time_step),
        ("t_max", cfg.t_max),
    ];
    if let Some((name, _)) = finite.iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::InvalidConfig(format!("{name} must be finite")));
    }
    if cfg.n_sites < 1 {
        return Err(Error::InvalidConfig("n_sites must be at least 1".into()));
    }
    if cfg.gamma < 0.0 {
        return Err(Error::InvalidConfig("gamma must be nonnegative".into()));
    }
    if cfg.time_step <= 0.0 {
        return Err(Error::InvalidConfig("time_step must be positive".into()));
    }
    if cfg.t_max < cfg.time_step {
        return Err(Error::InvalidConfig(
            "t_max must be at least time_step".into(),
        ));
    }
    if cfg.fields.len() != cfg.n_sites {
        return Err(Error::InvalidConfig(format!(
            "fields length mismatch: expected {}, got {}",
            cfg.n_sites,
            cfg.fields.len()
        )));
    }
    if cfg.fields.iter().any(|h| !h.is_finite()) {
        return Err(Error::InvalidConfig("fields must be finite".into()));
    }
    Ok(cfg)
}

/// Real symmetric tridiagonal Hamiltonian of the single-excitation sector.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleParticleHamiltonian {
    matrix: DMatrix<f64>,
}

impl SingleParticleHamiltonian {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().copied().collect()
    }

    /// Bond amplitudes `H[i][i+1]` for `i = 0..N`; entry 0 is the qubit bond.
    pub fn off_diagonal(&self) -> Vec<f64> {
        (0..self.dim() - 1)
            .map(|i| self.matrix[(i, i + 1)])
            .collect()
    }

    /// Chain-only block (sites 1..=N).
    pub fn chain_block(&self) -> DMatrix<f64> {
        let n = self.dim() - 1;
        self.matrix.view((1, 1), (n, n)).into_owned()
    }

    /// Gershgorin bound on the spectral radius.
    pub fn spectral_bound(&self) -> f64 {
        self.matrix
            .row_iter()
            .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Builds the sector Hamiltonian: `H[0][0] = ω₀`, `H[i][i] = h_i`,
/// `H[0][1] = g` and `J/2` on every chain bond. Constant offsets from
/// `S^z = n − 1/2` are dropped.
pub fn build_hamiltonian(cfg: &ModelConfig) -> SingleParticleHamiltonian {
    let n = cfg.n_sites;
    let mut matrix = DMatrix::zeros(n + 1, n + 1);
    matrix[(0, 0)] = cfg.omega0;
    for (i, &h) in cfg.fields.iter().enumerate() {
        matrix[(i + 1, i + 1)] = h;
    }
    matrix[(0, 1)] = cfg.g_coupling;
    matrix[(1, 0)] = cfg.g_coupling;
    let hop = 0.5 * cfg.j_coupling;
    for i in 1..n {
        matrix[(i, i + 1)] = hop;
        matrix[(i + 1, i)] = hop;
    }
    SingleParticleHamiltonian { matrix }
}

/// Chain eigenmodes: energies (ascending) and their weight on site 1.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeDecomposition {
    pub energies: Vec<f64>,
    pub boundary_weights: Vec<f64>,
}

impl ModeDecomposition {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.energies
            .iter()
            .copied()
            .zip(self.boundary_weights.iter().copied())
    }
}

/// Diagonalizes the chain block. Works for arbitrary fields, so disordered
/// chains go through the same path as clean ones.
pub fn chain_modes(cfg: &ModelConfig) -> ModeDecomposition {
    let block = build_hamiltonian(cfg).chain_block();
    let eig = SymmetricEigen::new(block);
    let mut pairs: Vec<(f64, f64)> = (0..cfg.n_sites)
        .map(|q| (eig.eigenvalues[q], eig.eigenvectors[(0, q)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (energies, boundary_weights) = pairs.into_iter().unzip();
    ModeDecomposition {
        energies,
        boundary_weights,
    }
}

/// Bath correlation `⟨ψ_B| S₁⁻ e^{−iH_B τ} S₁⁺ |ψ_B⟩ = Σ_q w_q e^{−iτE_q}`.
pub fn correlation_function(modes: &ModeDecomposition, tau: f64) -> Complex64 {
    modes
        .iter()
        .map(|(e, w)| w * Complex64::from_polar(1.0, -tau * e))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn reference_config_is_valid() {
        assert!(validate_config(ModelConfig::clean(10)).is_ok());
    }

    #[test]
    fn invalid_configs_are_named() {
        let err = validate_config(ModelConfig::clean(10).with_gamma(-1.0)).unwrap_err();
        assert!(err.to_string().contains("gamma must be nonnegative"));

        let err = validate_config(ModelConfig::clean(10).with_fields(vec![0.0; 9])).unwrap_err();
        assert!(err.to_string().contains("fields length mismatch"));

        let mut cfg = ModelConfig::clean(3);
        cfg.n_sites = 0;
        cfg.fields.clear();
        assert!(validate_config(cfg).is_err());

        assert!(validate_config(ModelConfig::clean(3).with_grid(0.1, 0.05)).is_err());
        assert!(validate_config(ModelConfig::clean(3).with_grid(0.0, 1.0)).is_err());
    }

    #[test]
    fn two_site_hamiltonian() {
        let h = build_hamiltonian(&ModelConfig::clean(1));
        assert_eq!(
            h.matrix(),
            &DMatrix::from_row_slice(2, 2, &[0.0, 0.2, 0.2, 0.0])
        );
    }

    #[test]
    fn chain_bonds_are_half_j() {
        let h = build_hamiltonian(&ModelConfig::clean(3));
        assert_eq!(h.off_diagonal(), vec![0.2, 2.0, 2.0]);
    }

    #[test]
    fn fields_on_diagonal() {
        let h = build_hamiltonian(&ModelConfig::clean(2).with_fields(vec![1.5, -0.5]));
        assert_eq!(h.diagonal(), vec![0.0, 1.5, -0.5]);
    }

    #[test]
    fn hamiltonian_symmetric_tridiagonal() {
        let cfg = ModelConfig::clean(6)
            .with_fields(vec![0.3, -1.0, 2.0, 0.0, 0.5, -0.7])
            .with_omega0(0.4);
        let h = build_hamiltonian(&cfg);
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(h.entry(i, j), h.entry(j, i));
                if i.abs_diff(j) > 1 {
                    assert_eq!(h.entry(i, j), 0.0);
                }
            }
        }
    }

    #[test]
    fn three_site_modes() {
        let modes = chain_modes(&ModelConfig::clean(3));
        let s = 2.0 * 2f64.sqrt();
        for (e, want) in modes.energies.iter().zip([-s, 0.0, s]) {
            assert!((e - want).abs() < 1e-12);
        }
        for (w, want) in modes.boundary_weights.iter().zip([0.25, 0.5, 0.25]) {
            assert!((w - want).abs() < 1e-12);
        }
    }

    #[test]
    fn clean_spectrum_matches_cosine_band() {
        for n in 1..=64 {
            let modes = chain_modes(&ModelConfig::clean(n));
            let mut analytic: Vec<(f64, f64)> = (1..=n)
                .map(|m| {
                    let k = m as f64 * PI / (n + 1) as f64;
                    (4.0 * k.cos(), 2.0 / (n + 1) as f64 * k.sin().powi(2))
                })
                .collect();
            analytic.sort_by(|a, b| a.0.total_cmp(&b.0));
            for ((e, w), (ea, wa)) in modes.iter().zip(analytic) {
                assert!((e - ea).abs() < 1e-10, "n={n}: {e} vs {ea}");
                assert!((w - wa).abs() < 1e-10, "n={n}: {w} vs {wa}");
            }
        }
    }

    #[test]
    fn correlation_trivial_values() {
        let modes = chain_modes(&ModelConfig::clean(7));
        assert!((correlation_function(&modes, 0.0) - 1.0).norm() < 1e-10);
        let single = chain_modes(&ModelConfig::clean(1));
        for tau in [0.0, 1.3, -4.0, 100.0] {
            assert!((correlation_function(&single, tau) - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn config_json_keys() {
        let cfg: ModelConfig = serde_json::from_str(
            r#"{"n": 3, "j": 4, "g": 0.2, "omega0": 0, "gamma": 0.5, "dt": 0.01, "t_max": 10}"#,
        )
        .unwrap();
        assert_eq!(cfg.fields, vec![0.0; 3]);
        assert_eq!(cfg.gamma, 0.5);
        let back: ModelConfig =
            serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);

        let bad = serde_json::from_str::<ModelConfig>(
            r#"{"n": 3, "j": 4, "g": 0.2, "omega0": 0, "gamma": -2, "dt": 0.01, "t_max": 10}"#,
        );
        assert!(bad
            .unwrap_err()
            .to_string()
            .contains("gamma must be nonnegative"));
    }
}
