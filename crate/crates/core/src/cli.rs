//! Experiment drivers: one subcommand-free binary whose `--experiment` flag
//! selects which data set to regenerate. Each run writes CSV files plus a
//! `meta.json` describing the resolved parameters and timings.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{CommandFactory, Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analysis::{
    bounce_for, gamma_c_numeric, gamma_c_single_mode, lightcone_grid, max_current_scan,
    search_horizon, GammaCMethod, GammaCSearch,
};
use crate::closed::{exact_closed_n0, tcl2_closed_n0};
use crate::disorder::{ensemble_average_n0, sample_fields, DisorderEngine, DisorderSpec};
use crate::error::{Error, Result};
use crate::model::{chain_modes, validate_config, ModelConfig};
use crate::open::{lindblad_sector_n0, IntegratorSettings};
use crate::output::{fmt_f64, paired_series_csv, population_csv, scalar_series_csv, Csv};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    #[value(name = "fig2-tcl2-vs-exact", alias = "fig2")]
    Fig2Tcl2VsExact,
    #[value(name = "fig3-bounce-scan", alias = "fig3")]
    Fig3BounceScan,
    #[value(name = "fig3-gammac-table")]
    Fig3GammacTable,
    #[value(name = "fig4-current-scan", alias = "fig4")]
    Fig4CurrentScan,
    #[value(name = "fig5-disorder", alias = "fig5")]
    Fig5Disorder,
    #[value(name = "fig6-lightcone", alias = "fig6")]
    Fig6Lightcone,
    #[value(name = "fig7-distinguish", alias = "fig7")]
    Fig7Distinguish,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Fig2Tcl2VsExact => "fig2-tcl2-vs-exact",
            Self::Fig3BounceScan => "fig3-bounce-scan",
            Self::Fig3GammacTable => "fig3-gammac-table",
            Self::Fig4CurrentScan => "fig4-current-scan",
            Self::Fig5Disorder => "fig5-disorder",
            Self::Fig6Lightcone => "fig6-lightcone",
            Self::Fig7Distinguish => "fig7-distinguish",
        }
    }
}

/// Source of `n₀(t)` for bounce scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum NumericMethod {
    Tcl2,
    Exact,
}

impl From<NumericMethod> for GammaCMethod {
    fn from(m: NumericMethod) -> Self {
        match m {
            NumericMethod::Tcl2 => GammaCMethod::NumericTcl2,
            NumericMethod::Exact => GammaCMethod::NumericExact,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Exact,
    Tcl2,
    Tcl2Averaged,
}

impl From<EngineArg> for DisorderEngine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Exact => DisorderEngine::ExactClosed,
            EngineArg::Tcl2 => DisorderEngine::Tcl2Closed,
            EngineArg::Tcl2Averaged => DisorderEngine::Tcl2AveragedKernel,
        }
    }
}

/// Fully resolved description of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub experiment: Experiment,
    pub config: ModelConfig,
    #[serde(default)]
    pub disorder: Option<DisorderSpec>,
    /// γ values for scans.
    #[serde(default)]
    pub sweep: Option<Vec<f64>>,
    /// Chain lengths for experiments that loop over N.
    #[serde(default)]
    pub n_list: Option<Vec<usize>>,
    #[serde(default)]
    pub method: Option<NumericMethod>,
    #[serde(default)]
    pub engine: Option<DisorderEngine>,
    pub output_dir: PathBuf,
}

fn nonneg_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be a nonnegative number, got {s}"))
    }
}

fn pos_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be a positive number, got {s}"))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qubit-probe",
    version,
    about = "Probe-qubit experiments on XX spin chains"
)]
struct Args {
    #[arg(long, value_enum)]
    experiment: Experiment,
    /// Chain length N.
    #[arg(long)]
    n: Option<usize>,
    /// Chain coupling J.
    #[arg(long, allow_negative_numbers = true)]
    j: Option<f64>,
    /// Qubit–chain coupling g.
    #[arg(long, allow_negative_numbers = true)]
    g: Option<f64>,
    /// Qubit splitting ω₀.
    #[arg(long, allow_negative_numbers = true)]
    omega0: Option<f64>,
    /// Dephasing strength γ.
    #[arg(long, allow_negative_numbers = true, value_parser = nonneg_f64)]
    gamma: Option<f64>,
    /// Disorder width W.
    #[arg(long, allow_negative_numbers = true, value_parser = nonneg_f64)]
    w: Option<f64>,
    #[arg(long)]
    realizations: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, allow_negative_numbers = true, value_parser = pos_f64)]
    dt: Option<f64>,
    #[arg(long = "t-max", allow_negative_numbers = true, value_parser = pos_f64)]
    t_max: Option<f64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// JSON config file; explicit flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated γ values for scans.
    #[arg(long, value_delimiter = ',', value_parser = pos_f64)]
    sweep: Option<Vec<f64>>,
    /// Comma-separated chain lengths for N sweeps.
    #[arg(long = "n-list", value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
    /// n₀ source for bounce scans.
    #[arg(long, value_enum)]
    method: Option<NumericMethod>,
    /// Per-realization solver for disorder ensembles.
    #[arg(long, value_enum)]
    engine: Option<EngineArg>,
}

/// Config-file keys. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    n: Option<usize>,
    j: Option<f64>,
    g: Option<f64>,
    omega0: Option<f64>,
    gamma: Option<f64>,
    fields: Option<Vec<f64>>,
    dt: Option<f64>,
    t_max: Option<f64>,
    w: Option<f64>,
    realizations: Option<usize>,
    seed: Option<u64>,
}

const DEFAULT_N: usize = 10;
const DEFAULT_SEED: u64 = 1;
const DEFAULT_REALIZATIONS: usize = 200;

/// Errors from argument parsing: either a clap usage error or a problem with
/// the resolved manifest.
#[derive(Debug)]
pub enum ParseError {
    Usage(clap::Error),
    Invalid(Error),
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(e) => write!(f, "{e}"),
            Self::Invalid(e) => write!(f, "{e}"),
        }
    }
}

/// Resolves flags > config file > defaults into a manifest.
pub fn parse_args<I, T>(argv: I) -> std::result::Result<ExperimentManifest, ParseError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(ParseError::Usage)?;
    resolve(args).map_err(ParseError::Invalid)
}

fn resolve(args: Args) -> Result<ExperimentManifest> {
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            serde_json::from_str::<FileConfig>(&text)?
        }
        None => FileConfig::default(),
    };
    let n = args.n.or(file.n).unwrap_or(DEFAULT_N);
    let config = validate_config(ModelConfig {
        n_sites: n,
        j_coupling: args.j.or(file.j).unwrap_or(4.0),
        g_coupling: args.g.or(file.g).unwrap_or(0.2),
        omega0: args.omega0.or(file.omega0).unwrap_or(0.0),
        gamma: args.gamma.or(file.gamma).unwrap_or(0.0),
        fields: file.fields.unwrap_or_else(|| vec![0.0; n]),
        time_step: args.dt.or(file.dt).unwrap_or(0.01),
        t_max: args.t_max.or(file.t_max).unwrap_or(60.0),
    })?;

    let width = args.w.or(file.w);
    let realizations = args
        .realizations
        .or(file.realizations)
        .unwrap_or(DEFAULT_REALIZATIONS);
    let seed = args.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
    let disorder = match (args.experiment, width) {
        (_, Some(w)) => Some(DisorderSpec::new(w, realizations, seed)?),
        (Experiment::Fig7Distinguish, None) => Some(DisorderSpec::new(10.0, realizations, seed)?),
        (Experiment::Fig5Disorder, None) => {
            return Err(Error::InvalidArgument(
                "fig5-disorder requires a disorder width (--w)".into(),
            ))
        }
        _ => None,
    };

    let manifest = ExperimentManifest {
        experiment: args.experiment,
        config,
        disorder,
        sweep: args.sweep,
        n_list: args.n_list,
        method: args.method,
        engine: args.engine.map(Into::into),
        output_dir: args.out,
    };
    check_manifest(&manifest)?;
    Ok(manifest)
}

fn check_manifest(m: &ExperimentManifest) -> Result<()> {
    validate_config(m.config.clone())?;
    let needs_disorder = matches!(
        m.experiment,
        Experiment::Fig5Disorder | Experiment::Fig7Distinguish
    );
    if needs_disorder && m.disorder.is_none() {
        return Err(Error::InvalidArgument(format!(
            "{} requires a disorder spec",
            m.experiment.name()
        )));
    }
    if let Some(ns) = &m.n_list {
        if ns.is_empty() || ns.contains(&0) {
            return Err(Error::InvalidArgument(
                "n-list entries must be at least 1".into(),
            ));
        }
    }
    if let Some(s) = &m.sweep {
        if s.is_empty() {
            return Err(Error::InvalidArgument("sweep must be nonempty".into()));
        }
    }
    Ok(())
}

fn default_bounce_gammas() -> Vec<f64> {
    (1..=30).map(|k| k as f64 * 0.01).collect()
}

/// Wall time of each phase, in execution order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub phases: Vec<PhaseTiming>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseTiming {
    pub phase: String,
    pub seconds: f64,
}

impl Timings {
    fn time<T>(&mut self, phase: impl Into<String>, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let out = f();
        self.phases.push(PhaseTiming {
            phase: phase.into(),
            seconds: start.elapsed().as_secs_f64(),
        });
        out
    }

    pub fn total(&self) -> f64 {
        self.phases.iter().map(|p| p.seconds).sum()
    }
}

/// Files produced by a successful run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunOutcome {
    pub outputs: Vec<String>,
    pub timings: Timings,
}

struct Writer<'a> {
    dir: &'a Path,
    outputs: Vec<String>,
}

impl Writer<'_> {
    fn csv(&mut self, name: &str, csv: &Csv) -> Result<()> {
        csv.write(&self.dir.join(name))?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        fs::write(
            self.dir.join(name),
            serde_json::to_string_pretty(value)? + "\n",
        )?;
        self.outputs.push(name.to_string());
        Ok(())
    }
}

fn gamma_tag(gamma: f64) -> String {
    format!("{gamma}")
}

/// Runs the manifest's experiment and writes its data files. The output
/// directory is created first; if that fails nothing is written.
pub fn run_experiment(manifest: &ExperimentManifest) -> Result<RunOutcome> {
    check_manifest(manifest)?;
    fs::create_dir_all(&manifest.output_dir)?;
    let mut timings = Timings::default();
    let mut w = Writer {
        dir: &manifest.output_dir,
        outputs: Vec::new(),
    };
    let cfg = &manifest.config;

    match manifest.experiment {
        Experiment::Fig2Tcl2VsExact => {
            let grid = cfg.grid()?;
            let exact = timings.time("exact", || Ok(exact_closed_n0(cfg, &grid)))?;
            let tcl2 =
                timings.time("tcl2", || Ok(tcl2_closed_n0(&chain_modes(cfg), cfg, &grid)))?;
            w.csv("exact.csv", &scalar_series_csv(&exact, "n0"))?;
            w.csv("tcl2.csv", &scalar_series_csv(&tcl2, "n0"))?;
        }
        Experiment::Fig3BounceScan => {
            let ns = manifest.n_list.clone().unwrap_or_else(|| vec![4, 6, 8, 10]);
            let gammas = manifest.sweep.clone().unwrap_or_else(default_bounce_gammas);
            let method: GammaCMethod = manifest.method.unwrap_or(NumericMethod::Tcl2).into();
            let horizon = search_horizon(gammas.iter().copied().fold(f64::INFINITY, f64::min));
            for n in ns {
                let template = validate_config(cfg.clone().with_n(n))?;
                let csv = timings.time(format!("bounce n={n}"), || {
                    let mut csv = Csv::new(&["gamma", "b_phi"]);
                    for &gamma in &gammas {
                        let b = bounce_for(
                            &template,
                            gamma,
                            method,
                            horizon,
                            cfg.time_step,
                            &IntegratorSettings::coarse(),
                        )?;
                        csv.float_row(&[gamma, b.value()]);
                    }
                    Ok(csv)
                })?;
                w.csv(&format!("bounce_n{n}.csv"), &csv)?;
            }
        }
        Experiment::Fig3GammacTable => {
            let ns = manifest.n_list.clone().unwrap_or_else(|| vec![4, 6, 8, 10]);
            let mut csv = Csv::new(&["n", "gamma_c", "method"]);
            for n in ns {
                let template = validate_config(cfg.clone().with_n(n))?;
                let search = GammaCSearch {
                    dt: cfg.time_step,
                    ..GammaCSearch::default()
                };
                for method in [GammaCMethod::NumericTcl2, GammaCMethod::NumericExact] {
                    let est = timings.time(format!("{} n={n}", method.label()), || {
                        gamma_c_numeric(&template, method, &search)
                    })?;
                    csv.row(&[
                        n.to_string(),
                        fmt_f64(est.gamma_c),
                        method.label().to_string(),
                    ]);
                }
                let est = gamma_c_single_mode(n, cfg.j_coupling)?;
                csv.row(&[
                    n.to_string(),
                    fmt_f64(est.gamma_c),
                    est.method.label().to_string(),
                ]);
            }
            w.csv("gamma_c.csv", &csv)?;
        }
        Experiment::Fig4CurrentScan => {
            let gammas = manifest
                .sweep
                .clone()
                .unwrap_or_else(|| vec![10.0, 20.0, 40.0, 80.0]);
            let bonds: Vec<usize> = (0..cfg.n_sites.min(4)).collect();
            let mut csv = Csv::new(&["gamma", "max_current", "bond"]);
            for gamma in gammas {
                let template = cfg
                    .clone()
                    .with_grid(cfg.time_step, cfg.t_max.max(10.0 * gamma));
                let points = timings.time(format!("currents gamma={gamma}"), || {
                    max_current_scan(&template, &bonds, &[gamma], &IntegratorSettings::coarse())
                })?;
                for p in points {
                    csv.row(&[fmt_f64(p.gamma), fmt_f64(p.max_current), p.bond.to_string()]);
                }
            }
            w.csv("currents.csv", &csv)?;
        }
        Experiment::Fig5Disorder => {
            let spec = manifest.disorder.expect("checked");
            let engine = manifest.engine.unwrap_or(DisorderEngine::ExactClosed);
            let template = cfg.clone().with_gamma(0.0);
            let grid = cfg.grid()?;
            let avg = timings.time("ensemble", || {
                ensemble_average_n0(&template, &spec, engine, &grid)
            })?;
            let single_cfg = template
                .clone()
                .with_fields(sample_fields(&spec, cfg.n_sites, 0)?);
            let single = timings.time("single", || Ok(exact_closed_n0(&single_cfg, &grid)))?;
            w.csv(
                "disorder.csv",
                &paired_series_csv(&avg.mean, "mean_n0", &avg.stderr, "stderr"),
            )?;
            w.csv("single.csv", &scalar_series_csv(&single, "n0"))?;
            w.json("disorder.json", &DisorderSidecar::new(&spec, engine))?;
        }
        Experiment::Fig6Lightcone => {
            let gammas = manifest.sweep.clone().unwrap_or_else(|| vec![10.0, 20.0]);
            for gamma in gammas {
                let run_cfg = cfg
                    .clone()
                    .with_gamma(gamma)
                    .with_grid(cfg.time_step, cfg.t_max.max(20.0 * gamma));
                let grid = run_cfg.grid()?;
                let pops = timings.time(format!("lightcone gamma={gamma}"), || {
                    lightcone_grid(&run_cfg, &grid, &IntegratorSettings::coarse())
                })?;
                w.csv(
                    &format!("lightcone_gamma{}.csv", gamma_tag(gamma)),
                    &population_csv(&pops),
                )?;
            }
        }
        Experiment::Fig7Distinguish => {
            let spec = manifest.disorder.expect("checked");
            let engine = manifest.engine.unwrap_or(DisorderEngine::ExactClosed);
            let clean = cfg
                .clone()
                .with_gamma(0.0)
                .with_fields(vec![0.0; cfg.n_sites]);
            let grid = cfg.grid()?;
            let localized = timings.time("localized", || {
                ensemble_average_n0(&clean, &spec, engine, &grid)
            })?;
            let delocalized = timings.time("delocalized", || Ok(exact_closed_n0(&clean, &grid)))?;
            let dephasing = timings.time("dephasing", || {
                lindblad_sector_n0(
                    &clean.clone().with_gamma(2.0),
                    &grid,
                    &IntegratorSettings::default(),
                )
            })?;
            w.csv(
                "localized.csv",
                &paired_series_csv(&localized.mean, "mean_n0", &localized.stderr, "stderr"),
            )?;
            w.csv("delocalized.csv", &scalar_series_csv(&delocalized, "n0"))?;
            w.csv("dephasing.csv", &scalar_series_csv(&dephasing, "n0"))?;
            w.json("disorder.json", &DisorderSidecar::new(&spec, engine))?;
        }
    }
    Ok(RunOutcome {
        outputs: w.outputs,
        timings,
    })
}

#[derive(Serialize)]
struct DisorderSidecar {
    seed: u64,
    width: f64,
    n_realizations: usize,
    engine: DisorderEngine,
}

impl DisorderSidecar {
    fn new(spec: &DisorderSpec, engine: DisorderEngine) -> Self {
        Self {
            seed: spec.seed,
            width: spec.width,
            n_realizations: spec.n_realizations,
            engine,
        }
    }
}

/// Contents of `meta.json`. Field order is fixed by the struct and maps are
/// sorted, so identical runs differ only in wall times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub status: String,
    pub experiment: Experiment,
    pub tool_version: String,
    pub seed: Option<u64>,
    pub manifest: ExperimentManifest,
    pub timings: Timings,
    pub wall_time_seconds: f64,
    pub outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default)]
    pub extra: BTreeMap<String, String>,
}

/// Writes `meta.json` into the manifest's output directory.
pub fn emit_meta(
    manifest: &ExperimentManifest,
    result: &std::result::Result<RunOutcome, String>,
    wall_time_seconds: f64,
) -> Result<PathBuf> {
    let (status, timings, outputs, error) = match result {
        Ok(out) => ("ok", out.timings.clone(), out.outputs.clone(), None),
        Err(e) => ("error", Timings::default(), Vec::new(), Some(e.clone())),
    };
    let meta = RunMeta {
        status: status.into(),
        experiment: manifest.experiment,
        tool_version: TOOL_VERSION.into(),
        seed: manifest.disorder.map(|d| d.seed),
        manifest: manifest.clone(),
        timings,
        wall_time_seconds,
        outputs,
        error,
        extra: BTreeMap::new(),
    };
    let path = manifest.output_dir.join("meta.json");
    fs::write(&path, serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(path)
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidConfig(_) => "invalid-config",
        Error::InvalidArgument(_) => "invalid-argument",
        Error::Dimension { .. } => "dimension",
        Error::IntegratorInstability { .. } => "integrator-instability",
        Error::TooFewSamples { .. } => "too-few-samples",
        Error::BracketFailure { .. } => "bracket-failure",
        Error::LambertDomain(_) => "domain",
        Error::IndexOutOfRange { .. } => "index-out-of-range",
        Error::HorizonTooShort { .. } => "horizon-too-short",
        Error::Degenerate(_) => "degenerate",
        Error::Realization { .. } => "realization",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
    }
}

/// Single-line machine-parseable error.
pub fn error_line(e: &Error) -> String {
    let msg = e.to_string().replace('\n', " ");
    format!("error kind={} message={:?}", error_kind(e), msg)
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let manifest = match parse_args(argv) {
        Ok(m) => m,
        Err(ParseError::Usage(e)) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
        Err(ParseError::Invalid(e)) => {
            eprintln!("{}", error_line(&e));
            eprintln!("{}", Args::command().render_usage());
            return 2;
        }
    };
    let start = Instant::now();
    let result = run_experiment(&manifest);
    let wall = start.elapsed().as_secs_f64();
    match result {
        Ok(outcome) => match emit_meta(&manifest, &Ok(outcome), wall) {
            Ok(_) => 0,
            Err(e) => {
                eprintln!("{}", error_line(&e));
                1
            }
        },
        Err(e) => {
            let line = error_line(&e);
            eprintln!("{line}");
            if manifest.output_dir.is_dir() {
                let _ = emit_meta(&manifest, &Err(line), wall);
            }
            1
        }
    }
}
