// SPDX-License-Identifier: MIT OR Apache-2.0

//! `nmcd detect | simulate | bench`.
//!
//! Exit codes: 0 success, 2 usage or input error, 1 internal error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nmcd_core::baselines::{pl_detect, PlConfig, PlCriterion};
use nmcd_core::modelselect::DEFAULT_ZETA_EXPONENT;
use nmcd_core::screen::default_window;
use nmcd_core::simgen::{generate, ErrorDist, Model, SimSpec};
use nmcd_core::{detect, DetectConfig, NmcdError, WeightVariant};

use crate::bench::{self, BenchConfig, Method, MethodOptions};
use crate::input::{self, InputError};
use crate::report::{self, ConfigEcho, DetectReport, SimSidecar};

#[derive(Debug, Parser)]
#[command(name = "nmcd", version, about = "Nonparametric multiple change-point detection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect change-points in a data file.
    Detect(DetectArgs),
    /// Write a simulated dataset and its true change-points.
    Simulate(SimulateArgs),
    /// Monte Carlo comparison of methods on a simulation model.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightArg {
    Zhang,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Nmcd,
    PlMean,
    PlMeanvar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputArg {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Blocks1,
    Meanscale2,
    Shape3,
    Diverging1,
    Diverging2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ErrorArg {
    Normal,
    T3,
    Chisq1,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Blocks1 => Model::Blocks,
            ModelArg::Meanscale2 => Model::MeanScale,
            ModelArg::Shape3 => Model::Shape,
            ModelArg::Diverging1 => Model::DivergingMean,
            ModelArg::Diverging2 => Model::DivergingScale,
        }
    }
}

impl From<ErrorArg> for ErrorDist {
    fn from(e: ErrorArg) -> Self {
        match e {
            ErrorArg::Normal => ErrorDist::Normal,
            ErrorArg::T3 => ErrorDist::T3,
            ErrorArg::Chisq1 => ErrorDist::ChiSq1,
        }
    }
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// One value per line, or a headed CSV when --column is given.
    pub input: PathBuf,
    /// CSV column holding the observations.
    #[arg(long)]
    pub column: Option<String>,
    /// Known number of change-points (skips the BIC).
    #[arg(long = "k")]
    pub k: Option<usize>,
    /// Upper bound on the number of change-points.
    #[arg(long)]
    pub max_k: Option<usize>,
    /// Penalty per change-point.
    #[arg(long)]
    pub zeta: Option<f64>,
    /// Exponent of the default penalty (ln n)^e / 2.
    #[arg(long)]
    pub zeta_exponent: Option<f64>,
    /// Screening half-window.
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub no_screening: bool,
    #[arg(long)]
    pub no_correction: bool,
    #[arg(long, value_enum)]
    pub weight: Option<WeightArg>,
    /// Allow the BIC to choose zero change-points.
    #[arg(long)]
    pub allow_zero: bool,
    #[arg(long, value_enum, default_value = "nmcd")]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value = "json")]
    pub output: OutputArg,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub sigma: f64,
    #[arg(long, value_enum, default_value = "normal")]
    pub error: ErrorArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Data file (one value per line).
    #[arg(long)]
    pub out: PathBuf,
    /// Sidecar JSON; defaults to `<out>.truth.json`.
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub sigma: f64,
    #[arg(long, value_enum, default_value = "normal")]
    pub error: ErrorArg,
    #[arg(long, default_value_t = 100)]
    pub reps: u64,
    /// Comma-separated: nmcd, nmcd-uniform, pl-mean, pl-meanvar.
    #[arg(long, value_delimiter = ',', default_value = "nmcd")]
    pub methods: Vec<Method>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Give each method the true number of change-points.
    #[arg(long)]
    pub known_k: bool,
    /// Upper bound on K for NMCD (default: screened set size).
    #[arg(long)]
    pub max_k: Option<usize>,
    /// Upper bound on K for the least-squares baselines.
    #[arg(long, default_value_t = 30)]
    pub pl_max_k: usize,
    /// Write the table here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Detection(#[from] NmcdError),
    #[error(transparent)]
    Internal(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            _ => 2,
        }
    }

    /// True when stdout was closed early, e.g. by `| head`.
    pub fn is_broken_pipe(&self) -> bool {
        let CliError::Internal(e) = self else {
            return false;
        };
        e.chain().any(|c| {
            c.downcast_ref::<std::io::Error>()
                .map(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
                .or_else(|| {
                    c.downcast_ref::<serde_json::Error>()
                        .map(|j| j.io_error_kind() == Some(std::io::ErrorKind::BrokenPipe))
                })
                .unwrap_or(false)
        })
    }
}

fn internal(e: impl Into<anyhow::Error>) -> CliError {
    CliError::Internal(e.into())
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Detect(a) => run_detect(&a, stdout),
        Command::Simulate(a) => run_simulate(&a),
        Command::Bench(a) => run_bench(&a, stdout),
    }
}

fn run_detect(a: &DetectArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let values = input::read_values(&a.input, a.column.as_deref())?;
    let n = values.len();
    let pl = a.method != MethodArg::Nmcd;
    if pl && (a.weight.is_some() || a.no_correction || a.window.is_some() || a.zeta_exponent.is_some()) {
        return Err(CliError::Usage(
            "--weight, --no-correction, --window and --zeta-exponent apply to --method nmcd only"
                .into(),
        ));
    }
    if a.no_screening && a.window.is_some() {
        return Err(CliError::Usage("--window conflicts with --no-screening".into()));
    }

    let t0 = Instant::now();
    let (res, echo) = if pl {
        let crit = if a.method == MethodArg::PlMean {
            PlCriterion::Mean
        } else {
            PlCriterion::MeanVar
        };
        let cfg = PlConfig {
            known_k: a.k,
            k_bar: a.max_k.unwrap_or(30),
            zeta: a.zeta,
            allow_zero: a.allow_zero,
        };
        let res = pl_detect(&values, crit, &cfg)?;
        let echo = ConfigEcho {
            method: if crit == PlCriterion::Mean { "pl-mean" } else { "pl-meanvar" }.into(),
            weight: None,
            correction: None,
            screening: false,
            window: None,
            zeta: res.bic.as_ref().map(|t| t.zeta),
            zeta_exponent: None,
            k_bar: res.bic.as_ref().map(|t| t.k_bar),
            known_k: a.k,
            allow_zero: a.allow_zero,
        };
        (res, echo)
    } else {
        let weight = match a.weight.unwrap_or(WeightArg::Zhang) {
            WeightArg::Zhang => WeightVariant::Zhang,
            WeightArg::Uniform => WeightVariant::Uniform,
        };
        let cfg = DetectConfig {
            weight,
            correction: !a.no_correction,
            screening: !a.no_screening,
            window: a.window,
            zeta: a.zeta,
            zeta_exponent: a.zeta_exponent.unwrap_or(DEFAULT_ZETA_EXPONENT),
            k_bar: a.max_k,
            known_k: a.k,
            allow_zero: a.allow_zero,
        };
        let res = detect(&values, &cfg)?;
        let echo = ConfigEcho {
            method: "nmcd".into(),
            weight: Some(report::weight_name(weight)),
            correction: Some(cfg.correction),
            screening: cfg.screening,
            window: res.candidates.as_ref().map(|c| c.window()).or_else(|| {
                cfg.screening.then(|| cfg.window.unwrap_or_else(|| default_window(n)))
            }),
            zeta: res.bic.as_ref().map(|t| t.zeta),
            zeta_exponent: Some(cfg.zeta_exponent),
            k_bar: res.bic.as_ref().map(|t| t.k_bar),
            known_k: a.k,
            allow_zero: a.allow_zero,
        };
        (res, echo)
    };
    let runtime_ms = t0.elapsed().as_secs_f64() * 1e3;

    match a.output {
        OutputArg::Json => {
            let rep = DetectReport::new(n, &res, echo, runtime_ms);
            serde_json::to_writer_pretty(&mut *stdout, &rep).map_err(internal)?;
            writeln!(stdout).map_err(internal)?;
        }
        OutputArg::Csv => {
            report::write_segments_csv(&values, &res.segmentation, &mut *stdout)
                .map_err(internal)?;
        }
    }
    Ok(())
}

fn run_simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let spec = SimSpec::new(a.model.into(), a.n, a.sigma, a.error.into(), a.seed);
    let (values, truth) = generate(&spec)?;
    let mut data = String::with_capacity(values.len() * 20);
    for v in &values {
        data.push_str(&v.to_string());
        data.push('\n');
    }
    fs::write(&a.out, data).map_err(internal)?;
    let sidecar_path = a.truth.clone().unwrap_or_else(|| {
        let mut p = a.out.clone().into_os_string();
        p.push(".truth.json");
        PathBuf::from(p)
    });
    let mut json = serde_json::to_string_pretty(&SimSidecar::new(&spec, &truth)).map_err(internal)?;
    json.push('\n');
    fs::write(sidecar_path, json).map_err(internal)?;
    Ok(())
}

fn run_bench(a: &BenchArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if a.reps == 0 {
        return Err(CliError::Usage("--reps must be positive".into()));
    }
    if a.methods.is_empty() {
        return Err(CliError::Usage("--methods is empty".into()));
    }
    let cfg = BenchConfig {
        spec: SimSpec::new(a.model.into(), a.n, a.sigma, a.error.into(), a.seed),
        reps: a.reps,
        methods: a.methods.clone(),
        options: MethodOptions {
            known_k: a.known_k,
            nmcd_k_bar: a.max_k,
            pl_k_bar: a.pl_max_k,
            ..MethodOptions::default()
        },
    };
    let runs = bench::run_bench(&cfg)?;
    match &a.out {
        Some(path) => {
            let f = fs::File::create(path).map_err(internal)?;
            bench::write_summary_csv(&runs, f).map_err(internal)?;
        }
        None => bench::write_summary_csv(&runs, &mut *stdout).map_err(internal)?,
    }
    Ok(())
}
