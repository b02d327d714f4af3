use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::estimation::{Increment, DEFAULT_FOLDS, DEFAULT_GRID_STEP};
use crate::model::DEFAULT_STEP_DAYS;

pub const OUTPUT_DIR_ENV: &str = "EPIFIT_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "epifit-out";
pub const DEFAULT_GAMMA: f64 = 1.0 / 14.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    #[default]
    Both,
}

impl OutputFormat {
    pub fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }
}

/// Keys accepted in a config file. Every key is optional; flags override.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub case_csv: Option<PathBuf>,
    pub demographics_csv: Option<PathBuf>,
    pub region: Option<String>,
    #[serde(default, deserialize_with = "toml_date")]
    pub estimation_start: Option<NaiveDate>,
    #[serde(default, deserialize_with = "toml_date")]
    pub estimation_end: Option<NaiveDate>,
    #[serde(default, deserialize_with = "toml_date")]
    pub forecast_end: Option<NaiveDate>,
    pub gamma: Option<f64>,
    pub folds: Option<usize>,
    pub rho_grid_step: Option<f64>,
    pub integrator_step_days: Option<f64>,
    pub output_dir: Option<PathBuf>,
    pub output_format: Option<OutputFormat>,
    pub beta_increment: Option<Increment>,
}

/// Accepts both bare TOML dates and quoted ISO-8601 strings.
fn toml_date<'de, D>(de: D) -> Result<Option<NaiveDate>, D::Error>
where
    D: serde::Deserializer<'de>,
{
    use serde::de::Error;
    let raw = match toml::Value::deserialize(de)? {
        toml::Value::String(s) => s,
        toml::Value::Datetime(dt) => dt.to_string(),
        other => return Err(D::Error::custom(format!("expected a date, found {other}"))),
    };
    raw.parse::<NaiveDate>()
        .map(Some)
        .map_err(|e| D::Error::custom(format!("bad date `{raw}`: {e}")))
}

impl FileConfig {
    /// Reads a flat TOML file. Relative paths are resolved against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        let mut cfg: FileConfig = toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [
            &mut cfg.case_csv,
            &mut cfg.demographics_csv,
            &mut cfg.output_dir,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

/// Fully resolved settings for one region run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub case_csv_path: PathBuf,
    pub demographics_csv_path: PathBuf,
    pub region: String,
    pub estimation_start: NaiveDate,
    pub estimation_end: NaiveDate,
    pub forecast_end: Option<NaiveDate>,
    pub gamma: f64,
    pub folds: usize,
    pub rho_grid_step: f64,
    pub integrator_step_days: f64,
    pub output_dir: PathBuf,
    pub output_format: OutputFormat,
    pub beta_increment: Increment,
}

fn required<T>(value: Option<T>, key: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing required setting `{key}`")))
}

impl RunConfig {
    /// Merges flag values over file values over defaults.
    pub fn resolve(flags: FileConfig, file: FileConfig) -> Result<Self, CliError> {
        let output_dir = flags
            .output_dir
            .or(file.output_dir)
            .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
        let cfg = RunConfig {
            case_csv_path: required(flags.case_csv.or(file.case_csv), "case_csv")?,
            demographics_csv_path: required(
                flags.demographics_csv.or(file.demographics_csv),
                "demographics_csv",
            )?,
            region: required(flags.region.or(file.region), "region")?,
            estimation_start: required(
                flags.estimation_start.or(file.estimation_start),
                "estimation_start",
            )?,
            estimation_end: required(
                flags.estimation_end.or(file.estimation_end),
                "estimation_end",
            )?,
            forecast_end: flags.forecast_end.or(file.forecast_end),
            gamma: flags.gamma.or(file.gamma).unwrap_or(DEFAULT_GAMMA),
            folds: flags.folds.or(file.folds).unwrap_or(DEFAULT_FOLDS),
            rho_grid_step: flags
                .rho_grid_step
                .or(file.rho_grid_step)
                .unwrap_or(DEFAULT_GRID_STEP),
            integrator_step_days: flags
                .integrator_step_days
                .or(file.integrator_step_days)
                .unwrap_or(DEFAULT_STEP_DAYS),
            output_dir,
            output_format: flags
                .output_format
                .or(file.output_format)
                .unwrap_or_default(),
            beta_increment: flags
                .beta_increment
                .or(file.beta_increment)
                .unwrap_or_default(),
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), CliError> {
        if self.estimation_end < self.estimation_start {
            return Err(CliError::Usage(format!(
                "estimation window {}..{} is reversed",
                self.estimation_start, self.estimation_end
            )));
        }
        if let Some(end) = self.forecast_end {
            if end <= self.estimation_end {
                return Err(CliError::Usage(format!(
                    "forecast_end {end} must be after estimation_end {}",
                    self.estimation_end
                )));
            }
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(CliError::Usage(format!(
                "gamma must be > 0, got {}",
                self.gamma
            )));
        }
        if self.folds < 2 {
            return Err(CliError::Usage(format!(
                "folds must be >= 2, got {}",
                self.folds
            )));
        }
        if !(self.integrator_step_days.is_finite() && self.integrator_step_days > 0.0) {
            return Err(CliError::Usage(format!(
                "integrator_step_days must be > 0, got {}",
                self.integrator_step_days
            )));
        }
        Ok(())
    }

    pub fn require_forecast_end(&self) -> Result<NaiveDate, CliError> {
        required(self.forecast_end, "forecast_end")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_file() -> FileConfig {
        FileConfig {
            case_csv: Some("cases.csv".into()),
            demographics_csv: Some("demo.csv".into()),
            region: Some("India".into()),
            estimation_start: Some("2020-06-05".parse().unwrap()),
            estimation_end: Some("2020-07-25".parse().unwrap()),
            forecast_end: Some("2020-09-30".parse().unwrap()),
            output_dir: Some("out".into()),
            ..Default::default()
        }
    }

    #[test]
    fn defaults_and_overrides() {
        let flags = FileConfig {
            folds: Some(5),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(flags, base_file()).unwrap();
        assert_eq!(cfg.folds, 5);
        assert_eq!(cfg.gamma, 1.0 / 14.0);
        assert_eq!(cfg.rho_grid_step, 0.001);
        assert_eq!(cfg.integrator_step_days, 0.1);
        assert_eq!(cfg.output_format, OutputFormat::Both);
        assert_eq!(cfg.beta_increment, Increment::ActiveChange);
    }

    #[test]
    fn rejects_disordered_windows() {
        let flags = FileConfig {
            forecast_end: Some("2020-07-01".parse().unwrap()),
            ..Default::default()
        };
        assert!(matches!(
            RunConfig::resolve(flags, base_file()),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn missing_region_is_usage_error() {
        let file = FileConfig {
            region: None,
            ..base_file()
        };
        match RunConfig::resolve(FileConfig::default(), file) {
            Err(CliError::Usage(msg)) => assert!(msg.contains("region")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parses_flat_toml() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(
            &path,
            "case_csv = \"cases.csv\"\nregion = \"Bihar\"\nestimation_start = 2020-06-05\n\
             output_format = \"json\"\nbeta_increment = \"new_confirmed\"\n",
        )
        .unwrap();
        let cfg = FileConfig::load(&path).unwrap();
        assert_eq!(cfg.case_csv.unwrap(), dir.path().join("cases.csv"));
        assert_eq!(cfg.region.as_deref(), Some("Bihar"));
        assert_eq!(cfg.output_format, Some(OutputFormat::Json));
        assert_eq!(cfg.beta_increment, Some(Increment::NewConfirmed));

        std::fs::write(&path, "nonsense_key = 1\n").unwrap();
        assert!(FileConfig::load(&path).is_err());
    }
}
