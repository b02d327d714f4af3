//! Daily transmission-rate samples backed out of observed prevalence.
//!
//! Rearranging the infected equation with a one-day forward difference gives
//!
//! ```text
//! beta(t) = (dI(t) / I(t) + gamma) * N / S(t)
//! ```
//!
//! with `S(t)` depleted by cumulative confirmed cases.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::regression::{fit_linear, k_fold_cv, RegressionFit};
use crate::data::EpiSeries;
use crate::error::{ensure_finite, Error, Result};

/// Default number of cross-validation folds.
pub const DEFAULT_FOLDS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaSample {
    /// Offset of `t` from the first day of the series.
    pub day_index: usize,
    pub beta: f64,
}

/// What counts as the daily increment `dI(t)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Increment {
    /// `active(t + 1) - active(t)`.
    #[default]
    ActiveChange,
    /// `confirmed(t + 1) - confirmed(t)`, the newly reported cases.
    NewConfirmed,
}

impl std::str::FromStr for Increment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "active_change" => Ok(Increment::ActiveChange),
            "new_confirmed" => Ok(Increment::NewConfirmed),
            other => Err(Error::invalid(format!(
                "unknown increment `{other}` (expected active_change or new_confirmed)"
            ))),
        }
    }
}

/// A day pair excluded from the sample set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedDay {
    pub day_index: usize,
    pub date: NaiveDate,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BetaSamples {
    pub samples: Vec<BetaSample>,
    pub skipped: Vec<SkippedDay>,
}

/// One sample per consecutive day pair, using the active-change increment.
pub fn beta_samples(
    series: &EpiSeries,
    gamma: f64,
    population: f64,
    susceptible_init: f64,
) -> Result<BetaSamples> {
    beta_samples_with(
        series,
        gamma,
        population,
        susceptible_init,
        Increment::ActiveChange,
    )
}

/// Like [`beta_samples`], choosing how the daily increment is read.
///
/// `susceptible_init` is S on the first day of the series; later days subtract
/// the confirmed cases added since. Days with no active cases are skipped and
/// reported; a non-positive S is an error.
pub fn beta_samples_with(
    series: &EpiSeries,
    gamma: f64,
    population: f64,
    susceptible_init: f64,
    increment: Increment,
) -> Result<BetaSamples> {
    ensure_finite("gamma", gamma)?;
    ensure_finite("population", population)?;
    ensure_finite("susceptible_init", susceptible_init)?;
    if gamma <= 0.0 || population <= 0.0 {
        return Err(Error::invalid("gamma and population must be positive"));
    }
    if series.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: series.len(),
        });
    }

    let mut out = BetaSamples::default();
    let c0 = series.confirmed[0];
    for t in 0..series.len() - 1 {
        let i_t = series.active[t];
        if i_t <= 0.0 {
            out.skipped.push(SkippedDay {
                day_index: t,
                date: series.dates[t],
                reason: "no active cases".into(),
            });
            continue;
        }
        let s_t = susceptible_init - (series.confirmed[t] - c0);
        if s_t <= 0.0 {
            return Err(Error::invalid(format!(
                "{} {}: susceptible count {s_t} is not positive",
                series.region, series.dates[t]
            )));
        }
        let delta = match increment {
            Increment::ActiveChange => series.active[t + 1] - i_t,
            Increment::NewConfirmed => series.confirmed[t + 1] - series.confirmed[t],
        };
        out.samples.push(BetaSample {
            day_index: t,
            beta: (delta / i_t + gamma) * (population / s_t),
        });
    }
    Ok(out)
}

/// Point estimate of beta and the regression behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaEstimate {
    pub beta_hat: f64,
    pub fit: RegressionFit,
    /// Mean held-out squared error from contiguous k-fold cross-validation.
    pub cv_error: f64,
    pub folds: usize,
}

/// Regresses beta on day index, cross-validates, and evaluates the all-sample
/// line at the middle of the observed day range.
pub fn cross_validated_beta(samples: &[BetaSample], folds: usize) -> Result<BetaEstimate> {
    if folds < 2 {
        return Err(Error::invalid(format!("folds must be >= 2, got {folds}")));
    }
    if samples.len() < folds {
        return Err(Error::TooFewSamples {
            needed: folds,
            got: samples.len(),
        });
    }
    let mut ordered = samples.to_vec();
    ordered.sort_by_key(|s| s.day_index);
    let points: Vec<(f64, f64)> = ordered
        .iter()
        .map(|s| (s.day_index as f64, s.beta))
        .collect();

    let cv = k_fold_cv(&points, folds)?;
    let fit = fit_linear(&points)?;
    let first = points[0].0;
    let last = points[points.len() - 1].0;
    Ok(BetaEstimate {
        beta_hat: fit.predict(0.5 * (first + last)),
        fit,
        cv_error: cv.mean_squared_error,
        folds,
    })
}
