//! `epifit` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data validation error,
//! 3 numerical failure.

pub mod config;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub use config::{FileConfig, OutputFormat, RunConfig, DEFAULT_GAMMA, OUTPUT_DIR_ENV};

use crate::data::{
    derive_epi_series, find_region, load_demographics, parse_case_csv, EpiSeries, RegionRecord,
};
use crate::error::Error;
use crate::estimation::{
    beta_samples_with, calibrate_rho_with_step, cross_validated_beta, BetaEstimate, BetaSamples,
    CalibrationResult, Increment,
};
use crate::forecast::{
    forecast_region_with_step, intervention_sweep_with_step, validate_with_step,
    write_forecast_csv, write_forecast_json, write_sweep_csv, write_sweep_json,
    write_validation_csv, write_validation_json, ForecastResult, Interval, SweepRow,
    ValidationReport,
};
use crate::model::{CompartmentState, ModelParams, DEFAULT_STEP_DAYS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Stage { stage: &'static str, source: Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Stage {
                source: Error::Numerical(_),
                ..
            } => EXIT_NUMERICAL,
            CliError::Stage { .. } => EXIT_DATA,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage: {msg}"),
            CliError::Stage { stage, source } => write!(f, "{stage}: {source}"),
        }
    }
}

impl std::error::Error for CliError {}

fn at(stage: &'static str) -> impl FnOnce(Error) -> CliError {
    move |source| CliError::Stage { stage, source }
}

#[derive(Debug, Parser)]
#[command(
    name = "epifit",
    version,
    about = "Fit and forecast an SIR model with intervention"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate the transmission rate over the estimation window.
    EstimateBeta(RunArgs),
    /// Fit the intervention level against observed active cases.
    Calibrate {
        #[command(flatten)]
        run: RunArgs,
        /// Use this transmission rate instead of estimating it.
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Compare model and observations over the estimation window.
    Validate {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        fixed: FixedParams,
    },
    /// Project active and recovered cases to the forecast end date.
    Forecast {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        fixed: FixedParams,
    },
    /// Peak and die-out summary across intervention levels.
    Sweep(SweepArgs),
    /// Estimate, calibrate, validate and forecast one region.
    Pipeline(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Flat TOML file with run settings; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    case_csv: Option<PathBuf>,
    #[arg(long)]
    demographics_csv: Option<PathBuf>,
    #[arg(long)]
    region: Option<String>,
    #[arg(long)]
    estimation_start: Option<NaiveDate>,
    #[arg(long)]
    estimation_end: Option<NaiveDate>,
    #[arg(long)]
    forecast_end: Option<NaiveDate>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long)]
    rho_grid_step: Option<f64>,
    #[arg(long = "integrator-step")]
    integrator_step_days: Option<f64>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    output_format: Option<OutputFormat>,
    /// `active_change` or `new_confirmed`.
    #[arg(long)]
    beta_increment: Option<Increment>,
}

impl RunArgs {
    fn resolve(self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let flags = FileConfig {
            case_csv: self.case_csv,
            demographics_csv: self.demographics_csv,
            region: self.region,
            estimation_start: self.estimation_start,
            estimation_end: self.estimation_end,
            forecast_end: self.forecast_end,
            gamma: self.gamma,
            folds: self.folds,
            rho_grid_step: self.rho_grid_step,
            integrator_step_days: self.integrator_step_days,
            output_dir: self.output_dir,
            output_format: self.output_format,
            beta_increment: self.beta_increment,
        };
        RunConfig::resolve(flags, file)
    }
}

#[derive(Debug, Args)]
struct FixedParams {
    /// Transmission rate; estimated from the data when omitted.
    #[arg(long)]
    beta: Option<f64>,
    /// Intervention level; calibrated from the data when omitted.
    #[arg(long)]
    rho: Option<f64>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Population size.
    #[arg(long = "n")]
    population: f64,
    /// Initial infected.
    #[arg(long)]
    i0: f64,
    /// Initial removed.
    #[arg(long, default_value_t = 0.0)]
    r0: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = DEFAULT_GAMMA)]
    gamma: f64,
    /// Comma-separated intervention levels.
    #[arg(long, value_delimiter = ',', required = true)]
    rhos: Vec<f64>,
    #[arg(long, default_value_t = 400)]
    horizon: u32,
    #[arg(long = "integrator-step", default_value_t = DEFAULT_STEP_DAYS)]
    integrator_step_days: f64,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    output_format: Option<OutputFormat>,
}

/// Runs the CLI with process stdout/stderr and returns the exit code.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_command_with_io(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Same as [`run_command`] with explicit output streams.
pub fn run_command_with_io<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "epifit: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::EstimateBeta(run) => {
            let cfg = run.resolve()?;
            let data = RegionData::load(&cfg, err)?;
            let (samples, est) = data.estimate(&cfg, err)?;
            print_estimate(out, &data, &samples, &est).map_err(io_at("report"))
        }
        Command::Calibrate { run, beta } => {
            let cfg = run.resolve()?;
            let data = RegionData::load(&cfg, err)?;
            let beta = match beta {
                Some(b) => b,
                None => data.estimate(&cfg, err)?.1.beta_hat,
            };
            let cal = data.calibrate(&cfg, beta)?;
            print_rows(
                out,
                &[
                    ("region", data.series.region.clone()),
                    ("beta", fmt6(beta)),
                    ("rho", fmt6(cal.rho)),
                    ("objective", fmt6(cal.objective)),
                    ("grid_step", fmt6(cal.grid_step)),
                ],
            )
            .map_err(io_at("report"))
        }
        Command::Validate { run, fixed } => {
            let cfg = run.resolve()?;
            let data = RegionData::load(&cfg, err)?;
            let params = data.fixed_or_fitted(&cfg, &fixed, err)?;
            let report = validate_with_step(
                &data.series,
                &params,
                &data.demographics,
                cfg.integrator_step_days,
            )
            .map_err(at("validate"))?;
            let mut outputs = Outputs::new(&cfg.output_dir);
            outputs.validation(&cfg, &data, &report)?;
            outputs.commit()?;
            print_validation(out, &report).map_err(io_at("report"))
        }
        Command::Forecast { run, fixed } => {
            let cfg = run.resolve()?;
            let end = cfg.require_forecast_end()?;
            let data = RegionData::load(&cfg, err)?;
            let params = data.fixed_or_fitted(&cfg, &fixed, err)?;
            let result = data.forecast(&cfg, &params, end)?;
            let mut outputs = Outputs::new(&cfg.output_dir);
            outputs.forecast(&cfg, &data, &result)?;
            outputs.commit()?;
            print_forecast(out, &result).map_err(io_at("report"))
        }
        Command::Sweep(args) => sweep(args, out),
        Command::Pipeline(run) => pipeline(run, out, err),
    }
}

fn io_at(stage: &'static str) -> impl FnOnce(std::io::Error) -> CliError {
    move |e| CliError::Stage {
        stage,
        source: Error::Io(e),
    }
}

struct RegionData {
    series: EpiSeries,
    demographics: RegionRecord,
    case_sha256: String,
    demographics_sha256: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Stage {
        stage: "load",
        source: Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        )),
    })
}

impl RegionData {
    fn load(cfg: &RunConfig, err: &mut dyn Write) -> Result<Self, CliError> {
        let case_bytes = read_input(&cfg.case_csv_path)?;
        let demo_bytes = read_input(&cfg.demographics_csv_path)?;
        let parsed = parse_case_csv(case_bytes.as_slice()).map_err(at("load cases"))?;
        for w in parsed.warnings.iter().filter(|w| w.region == cfg.region) {
            let _ = writeln!(err, "warning: {w}");
        }
        let series = derive_epi_series(
            &parsed.records,
            &cfg.region,
            cfg.estimation_start,
            cfg.estimation_end,
        )
        .map_err(at("load cases"))?;
        let regions = load_demographics(demo_bytes.as_slice()).map_err(at("load demographics"))?;
        let demographics = find_region(&regions, &cfg.region)
            .map_err(at("load demographics"))?
            .clone();
        Ok(Self {
            series,
            demographics,
            case_sha256: sha256_hex(&case_bytes),
            demographics_sha256: sha256_hex(&demo_bytes),
        })
    }

    fn population(&self) -> f64 {
        self.demographics.population as f64
    }

    fn estimate(
        &self,
        cfg: &RunConfig,
        err: &mut dyn Write,
    ) -> Result<(BetaSamples, BetaEstimate), CliError> {
        let susceptible_init = self.population() - self.series.confirmed[0];
        let samples = beta_samples_with(
            &self.series,
            cfg.gamma,
            self.population(),
            susceptible_init,
            cfg.beta_increment,
        )
        .map_err(at("estimate-beta"))?;
        for s in &samples.skipped {
            let _ = writeln!(err, "warning: skipped {} ({})", s.date, s.reason);
        }
        let est = cross_validated_beta(&samples.samples, cfg.folds).map_err(at("estimate-beta"))?;
        Ok((samples, est))
    }

    fn calibrate(&self, cfg: &RunConfig, beta: f64) -> Result<CalibrationResult, CliError> {
        let params =
            ModelParams::new(beta, cfg.gamma, 0.0, self.population()).map_err(at("calibrate"))?;
        calibrate_rho_with_step(
            &self.series,
            &params,
            cfg.rho_grid_step,
            cfg.integrator_step_days,
        )
        .map_err(at("calibrate"))
    }

    fn fixed_or_fitted(
        &self,
        cfg: &RunConfig,
        fixed: &FixedParams,
        err: &mut dyn Write,
    ) -> Result<ModelParams, CliError> {
        let beta = match fixed.beta {
            Some(b) => b,
            None => self.estimate(cfg, err)?.1.beta_hat,
        };
        let rho = match fixed.rho {
            Some(r) => r,
            None => self.calibrate(cfg, beta)?.rho,
        };
        ModelParams::new(beta, cfg.gamma, rho, self.population()).map_err(at("parameters"))
    }

    fn forecast(
        &self,
        cfg: &RunConfig,
        params: &ModelParams,
        end: NaiveDate,
    ) -> Result<ForecastResult, CliError> {
        forecast_region_with_step(
            &self.series,
            &self.demographics,
            params,
            end,
            cfg.integrator_step_days,
        )
        .map_err(at("forecast"))
    }
}

/// Files staged in memory and written together once every stage succeeded.
struct Outputs {
    dir: PathBuf,
    files: Vec<(String, Vec<u8>)>,
}

fn slug(region: &str) -> String {
    region
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect()
}

impl Outputs {
    fn new(dir: &Path) -> Self {
        Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        }
    }

    fn add<F>(&mut self, name: String, render: F) -> Result<(), CliError>
    where
        F: FnOnce(&mut Vec<u8>) -> crate::Result<()>,
    {
        let mut buf = Vec::new();
        render(&mut buf).map_err(at("render"))?;
        self.files.push((name, buf));
        Ok(())
    }

    fn validation(
        &mut self,
        cfg: &RunConfig,
        data: &RegionData,
        report: &ValidationReport,
    ) -> Result<(), CliError> {
        let stem = slug(&data.series.region);
        if cfg.output_format.csv() {
            self.add(format!("{stem}_validation.csv"), |b| {
                write_validation_csv(report, b)
            })?;
        }
        if cfg.output_format.json() {
            self.add(format!("{stem}_validation.json"), |b| {
                write_validation_json(report, b)
            })?;
        }
        Ok(())
    }

    fn forecast(
        &mut self,
        cfg: &RunConfig,
        data: &RegionData,
        result: &ForecastResult,
    ) -> Result<(), CliError> {
        let stem = slug(&data.series.region);
        if cfg.output_format.csv() {
            self.add(format!("{stem}_forecast.csv"), |b| {
                write_forecast_csv(result, b)
            })?;
        }
        if cfg.output_format.json() {
            self.add(format!("{stem}_forecast.json"), |b| {
                write_forecast_json(result, b)
            })?;
        }
        Ok(())
    }

    fn names(&self) -> Vec<String> {
        self.files.iter().map(|(n, _)| n.clone()).collect()
    }

    /// Writes every staged file to a temporary name, then renames them all.
    fn commit(self) -> Result<(), CliError> {
        let io = io_at("write");
        let result = (|| -> std::io::Result<()> {
            std::fs::create_dir_all(&self.dir)?;
            let mut staged = Vec::with_capacity(self.files.len());
            for (name, bytes) in &self.files {
                let tmp = self.dir.join(format!(".{name}.tmp"));
                std::fs::write(&tmp, bytes)?;
                staged.push((tmp, self.dir.join(name)));
            }
            for (tmp, dest) in staged {
                std::fs::rename(tmp, dest)?;
            }
            Ok(())
        })();
        result.map_err(io)
    }
}

fn sweep(args: SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let params = ModelParams::new(args.beta, args.gamma, 0.0, args.population)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let initial = CompartmentState::new(0.0, args.population - args.i0 - args.r0, args.i0, args.r0);
    let rows = intervention_sweep_with_step(
        &params,
        &initial,
        args.horizon,
        &args.rhos,
        args.integrator_step_days,
    )
    .map_err(at("sweep"))?;

    let dir = args
        .output_dir
        .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(config::DEFAULT_OUTPUT_DIR));
    let format = args.output_format.unwrap_or_default();
    let mut outputs = Outputs::new(&dir);
    if format.csv() {
        outputs.add("sweep.csv".into(), |b| write_sweep_csv(&rows, b))?;
    }
    if format.json() {
        outputs.add("sweep.json".into(), |b| write_sweep_json(&rows, b))?;
    }
    outputs.commit()?;
    print_sweep(out, &rows).map_err(io_at("report"))
}

#[derive(Serialize)]
struct InputFile {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Window {
    start: NaiveDate,
    end: NaiveDate,
    days: usize,
}

#[derive(Serialize)]
struct BetaSection {
    beta_hat: f64,
    alpha0: f64,
    alpha1: f64,
    residual_variance: f64,
    cv_error: f64,
    samples: usize,
    skipped_days: Vec<NaiveDate>,
}

#[derive(Serialize)]
struct ValidationSection {
    mae_active: f64,
    rmse_active: f64,
    mae_removed: f64,
    rmse_removed: f64,
}

#[derive(Serialize)]
struct ForecastSection {
    start_date: NaiveDate,
    end_date: NaiveDate,
    endpoint_active: f64,
    endpoint_recovered: f64,
    active_ci95: Interval,
    active_ci99: Interval,
    recovered_ci95: Interval,
    recovered_ci99: Interval,
}

#[derive(Serialize)]
struct Manifest {
    tool: &'static str,
    version: &'static str,
    region: String,
    population: u64,
    case_csv: InputFile,
    demographics_csv: InputFile,
    estimation_window: Window,
    forecast_end: NaiveDate,
    gamma: f64,
    folds: usize,
    rho_grid_step: f64,
    integrator_step_days: f64,
    beta_increment: Increment,
    output_format: OutputFormat,
    beta: BetaSection,
    calibration: CalibrationResult,
    params: ModelParams,
    validation: ValidationSection,
    forecast: ForecastSection,
    outputs: Vec<String>,
}

fn pipeline(run: RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let cfg = run.resolve()?;
    let end = cfg.require_forecast_end()?;
    let data = RegionData::load(&cfg, err)?;
    let (samples, est) = data.estimate(&cfg, err)?;
    let cal = data.calibrate(&cfg, est.beta_hat)?;
    let params = ModelParams::new(est.beta_hat, cfg.gamma, cal.rho, data.population())
        .map_err(at("parameters"))?;
    let report = validate_with_step(
        &data.series,
        &params,
        &data.demographics,
        cfg.integrator_step_days,
    )
    .map_err(at("validate"))?;
    let result = data.forecast(&cfg, &params, end)?;

    let mut outputs = Outputs::new(&cfg.output_dir);
    outputs.validation(&cfg, &data, &report)?;
    outputs.forecast(&cfg, &data, &result)?;
    let manifest_name = format!("{}_manifest.json", slug(&data.series.region));
    let mut listed = outputs.names();
    listed.push(manifest_name.clone());

    let manifest = Manifest {
        tool: "epifit",
        version: env!("CARGO_PKG_VERSION"),
        region: data.series.region.clone(),
        population: data.demographics.population,
        case_csv: InputFile {
            path: cfg.case_csv_path.display().to_string(),
            sha256: data.case_sha256.clone(),
        },
        demographics_csv: InputFile {
            path: cfg.demographics_csv_path.display().to_string(),
            sha256: data.demographics_sha256.clone(),
        },
        estimation_window: Window {
            start: cfg.estimation_start,
            end: cfg.estimation_end,
            days: data.series.len(),
        },
        forecast_end: end,
        gamma: cfg.gamma,
        folds: cfg.folds,
        rho_grid_step: cfg.rho_grid_step,
        integrator_step_days: cfg.integrator_step_days,
        beta_increment: cfg.beta_increment,
        output_format: cfg.output_format,
        beta: BetaSection {
            beta_hat: est.beta_hat,
            alpha0: est.fit.alpha0,
            alpha1: est.fit.alpha1,
            residual_variance: est.fit.residual_variance,
            cv_error: est.cv_error,
            samples: samples.samples.len(),
            skipped_days: samples.skipped.iter().map(|s| s.date).collect(),
        },
        calibration: cal,
        params,
        validation: ValidationSection {
            mae_active: report.mae_active,
            rmse_active: report.rmse_active,
            mae_removed: report.mae_removed,
            rmse_removed: report.rmse_removed,
        },
        forecast: ForecastSection {
            start_date: result.start_date,
            end_date: result.end_date(),
            endpoint_active: result.endpoint_active,
            endpoint_recovered: result.endpoint_recovered,
            active_ci95: result.active_ci95,
            active_ci99: result.active_ci99,
            recovered_ci95: result.recovered_ci95,
            recovered_ci99: result.recovered_ci99,
        },
        outputs: listed,
    };
    outputs.add(manifest_name, |b| {
        serde_json::to_writer_pretty(&mut *b, &manifest).map_err(std::io::Error::from)?;
        b.push(b'\n');
        Ok(())
    })?;
    outputs.commit()?;

    print_rows(
        out,
        &[
            ("region", data.series.region.clone()),
            ("population", data.demographics.population.to_string()),
            ("beta", fmt6(est.beta_hat)),
            ("cv_error", fmt6(est.cv_error)),
            ("rho", fmt6(cal.rho)),
            ("rmse_active", fmt6(report.rmse_active)),
            ("rmse_removed", fmt6(report.rmse_removed)),
            ("endpoint_active", fmt6(result.endpoint_active)),
            ("endpoint_recovered", fmt6(result.endpoint_recovered)),
            ("output_dir", cfg.output_dir.display().to_string()),
        ],
    )
    .map_err(io_at("report"))
}

/// Six significant digits, without exponent for ordinary magnitudes.
pub fn fmt6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&magnitude) {
        return format!("{x:.5e}");
    }
    let decimals = 5 - magnitude;
    if decimals >= 0 {
        let s = format!("{x:.*}", decimals as usize);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let scale = 10f64.powi(-decimals);
        format!("{:.0}", (x / scale).round() * scale)
    }
}

fn print_rows(out: &mut dyn Write, rows: &[(&str, String)]) -> std::io::Result<()> {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in rows {
        writeln!(out, "{k:<width$}  {v}")?;
    }
    Ok(())
}

fn print_estimate(
    out: &mut dyn Write,
    data: &RegionData,
    samples: &BetaSamples,
    est: &BetaEstimate,
) -> std::io::Result<()> {
    print_rows(
        out,
        &[
            ("region", data.series.region.clone()),
            (
                "window",
                format!("{}..{}", data.series.start_date(), data.series.end_date()),
            ),
            ("samples", samples.samples.len().to_string()),
            ("skipped", samples.skipped.len().to_string()),
            ("beta_hat", fmt6(est.beta_hat)),
            ("alpha0", fmt6(est.fit.alpha0)),
            ("alpha1", fmt6(est.fit.alpha1)),
            ("residual_variance", fmt6(est.fit.residual_variance)),
            ("cv_error", fmt6(est.cv_error)),
            ("folds", est.folds.to_string()),
        ],
    )
}

fn print_validation(out: &mut dyn Write, r: &ValidationReport) -> std::io::Result<()> {
    print_rows(
        out,
        &[
            ("region", r.region.clone()),
            ("window", format!("{}..{}", r.start_date, r.end_date)),
            ("mae_active", fmt6(r.mae_active)),
            ("rmse_active", fmt6(r.rmse_active)),
            ("mae_removed", fmt6(r.mae_removed)),
            ("rmse_removed", fmt6(r.rmse_removed)),
        ],
    )
}

fn print_forecast(out: &mut dyn Write, r: &ForecastResult) -> std::io::Result<()> {
    let iv = |i: Interval| format!("[{}, {}]", fmt6(i.low), fmt6(i.high));
    print_rows(
        out,
        &[
            ("region", r.region.clone()),
            ("window", format!("{}..{}", r.start_date, r.end_date())),
            ("beta", fmt6(r.params.beta)),
            ("rho", fmt6(r.params.rho)),
            ("endpoint_active", fmt6(r.endpoint_active)),
            ("active_ci95", iv(r.active_ci95)),
            ("active_ci99", iv(r.active_ci99)),
            ("endpoint_recovered", fmt6(r.endpoint_recovered)),
            ("recovered_ci95", iv(r.recovered_ci95)),
            ("recovered_ci99", iv(r.recovered_ci99)),
        ],
    )
}

fn print_sweep(out: &mut dyn Write, rows: &[SweepRow]) -> std::io::Result<()> {
    writeln!(
        out,
        "{:>8}  {:>12}  {:>8}  {:>11}",
        "rho", "peak", "peak_day", "die_out_day"
    )?;
    for r in rows {
        let die = r
            .die_out_day
            .map_or_else(|| "-".to_string(), |d| d.to_string());
        writeln!(
            out,
            "{:>8}  {:>12}  {:>8}  {:>11}",
            fmt6(r.rho),
            fmt6(r.peak_infected),
            r.peak_day,
            die
        )?;
    }
    Ok(())
}
