//! Projections, confidence intervals, validation against observations and
//! intervention sweeps.

use std::io::Write;

use chrono::{Duration, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::data::{EpiSeries, RegionRecord};
use crate::error::{Error, Result};
use crate::model::{integrate, CompartmentState, ModelParams, Trajectory, DEFAULT_STEP_DAYS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConfidenceLevel {
    P95,
    P99,
}

impl ConfidenceLevel {
    /// Two-sided standard normal quantile.
    pub fn z(self) -> f64 {
        match self {
            ConfidenceLevel::P95 => 1.96,
            ConfidenceLevel::P99 => 2.576,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
}

impl Interval {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.low + self.high)
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.low <= other.low && other.high <= self.high
    }
}

/// Normal-approximation interval for the mean of `values`:
/// `mean ± z * sd / sqrt(n)` with the sample standard deviation.
pub fn confidence_interval(values: &[f64], level: ConfidenceLevel) -> Result<Interval> {
    let n = values.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("non-finite value {v} in series")));
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    let half = level.z() * var.sqrt() / nf.sqrt();
    Ok(Interval {
        low: mean - half,
        high: mean + half,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastResult {
    pub region: String,
    pub params: ModelParams,
    pub start_date: NaiveDate,
    pub trajectory: Trajectory,
    pub active_ci95: Interval,
    pub active_ci99: Interval,
    pub recovered_ci95: Interval,
    pub recovered_ci99: Interval,
    pub endpoint_active: f64,
    pub endpoint_recovered: f64,
}

impl ForecastResult {
    pub fn end_date(&self) -> NaiveDate {
        self.start_date + Duration::days(self.trajectory.len() as i64 - 1)
    }

    pub fn dates(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        (0..self.trajectory.len()).map(move |k| self.start_date + Duration::days(k as i64))
    }

    /// Checks the interval nesting and endpoint invariants.
    pub fn check(&self) -> Result<()> {
        for (name, wide, narrow) in [
            ("active", self.active_ci99, self.active_ci95),
            ("recovered", self.recovered_ci99, self.recovered_ci95),
        ] {
            if !(wide.low <= narrow.low && narrow.low <= narrow.high && narrow.high <= wide.high) {
                return Err(Error::Numerical(format!("{name} intervals are not nested")));
            }
        }
        let last = self.trajectory.last();
        if last.i != self.endpoint_active || last.r != self.endpoint_recovered {
            return Err(Error::Numerical(
                "endpoint differs from final sample".into(),
            ));
        }
        Ok(())
    }
}

fn params_for(demographics: &RegionRecord, params: &ModelParams) -> Result<ModelParams> {
    ModelParams::new(
        params.beta,
        params.gamma,
        params.rho,
        demographics.population as f64,
    )
}

/// Projects from the last observed day of `series` through `end_date`
/// (inclusive). The population is taken from `demographics`.
pub fn forecast_region(
    series: &EpiSeries,
    demographics: &RegionRecord,
    params: &ModelParams,
    end_date: NaiveDate,
) -> Result<ForecastResult> {
    forecast_region_with_step(series, demographics, params, end_date, DEFAULT_STEP_DAYS)
}

pub fn forecast_region_with_step(
    series: &EpiSeries,
    demographics: &RegionRecord,
    params: &ModelParams,
    end_date: NaiveDate,
    step_days: f64,
) -> Result<ForecastResult> {
    if series.is_empty() {
        return Err(Error::invalid("series is empty"));
    }
    let start_date = series.end_date();
    let horizon = (end_date - start_date).num_days();
    if horizon <= 0 {
        return Err(Error::invalid(format!(
            "forecast end {end_date} must be after start {start_date}"
        )));
    }
    let params = params_for(demographics, params)?;
    let initial = series.state_at(series.len() - 1, params.population)?;
    let trajectory = integrate(&initial, &params, horizon as u32, step_days)?;

    let active = trajectory.infected();
    let recovered = trajectory.removed();
    let last = *trajectory.last();
    let result = ForecastResult {
        region: series.region.clone(),
        params,
        start_date,
        active_ci95: confidence_interval(&active, ConfidenceLevel::P95)?,
        active_ci99: confidence_interval(&active, ConfidenceLevel::P99)?,
        recovered_ci95: confidence_interval(&recovered, ConfidenceLevel::P95)?,
        recovered_ci99: confidence_interval(&recovered, ConfidenceLevel::P99)?,
        endpoint_active: last.i,
        endpoint_recovered: last.r,
        trajectory,
    };
    result.check()?;
    Ok(result)
}

/// Predicted-versus-observed comparison over an observation window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub region: String,
    pub start_date: NaiveDate,
    pub end_date: NaiveDate,
    pub mae_active: f64,
    pub rmse_active: f64,
    pub mae_removed: f64,
    pub rmse_removed: f64,
    pub dates: Vec<NaiveDate>,
    pub observed_active: Vec<f64>,
    pub predicted_active: Vec<f64>,
    pub observed_removed: Vec<f64>,
    pub predicted_removed: Vec<f64>,
}

fn mae_rmse(predicted: &[f64], observed: &[f64]) -> (f64, f64) {
    let n = predicted.len() as f64;
    let (mut abs, mut sq) = (0.0, 0.0);
    for (p, o) in predicted.iter().zip(observed) {
        let e = p - o;
        abs += e.abs();
        sq += e * e;
    }
    let mae = abs / n;
    // sqrt rounding can land a hair under the mean when all errors are equal
    let rmse = (sq / n).sqrt().max(mae);
    (mae, rmse)
}

/// Integrates from the first day of `series` and scores every day of it.
pub fn validate(
    series: &EpiSeries,
    params: &ModelParams,
    demographics: &RegionRecord,
) -> Result<ValidationReport> {
    validate_with_step(series, params, demographics, DEFAULT_STEP_DAYS)
}

pub fn validate_with_step(
    series: &EpiSeries,
    params: &ModelParams,
    demographics: &RegionRecord,
    step_days: f64,
) -> Result<ValidationReport> {
    if series.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: series.len(),
        });
    }
    let params = params_for(demographics, params)?;
    let initial = series.state_at(0, params.population)?;
    let traj = integrate(&initial, &params, (series.len() - 1) as u32, step_days)?;
    let predicted_active = traj.infected();
    let predicted_removed = traj.removed();
    let (mae_active, rmse_active) = mae_rmse(&predicted_active, &series.active);
    let (mae_removed, rmse_removed) = mae_rmse(&predicted_removed, &series.removed);
    Ok(ValidationReport {
        region: series.region.clone(),
        start_date: series.start_date(),
        end_date: series.end_date(),
        mae_active,
        rmse_active,
        mae_removed,
        rmse_removed,
        dates: series.dates.clone(),
        observed_active: series.active.clone(),
        predicted_active,
        observed_removed: series.removed.clone(),
        predicted_removed,
    })
}

/// Peak and die-out summary for one intervention level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub rho: f64,
    pub peak_infected: f64,
    pub peak_day: usize,
    /// `None` when I is still at least one person at the horizon.
    pub die_out_day: Option<usize>,
}

pub fn intervention_sweep(
    base: &ModelParams,
    initial: &CompartmentState,
    horizon_days: u32,
    rho_values: &[f64],
) -> Result<Vec<SweepRow>> {
    intervention_sweep_with_step(base, initial, horizon_days, rho_values, DEFAULT_STEP_DAYS)
}

/// Rows follow the order of `rho_values`.
pub fn intervention_sweep_with_step(
    base: &ModelParams,
    initial: &CompartmentState,
    horizon_days: u32,
    rho_values: &[f64],
    step_days: f64,
) -> Result<Vec<SweepRow>> {
    rho_values
        .iter()
        .map(|&rho| {
            let params = base.with_rho(rho)?;
            let traj = integrate(initial, &params, horizon_days, step_days)?;
            let peak = traj.peak();
            Ok(SweepRow {
                rho,
                peak_infected: peak.infected,
                peak_day: peak.day,
                die_out_day: traj.die_out_day(),
            })
        })
        .collect()
}

#[derive(Serialize)]
struct ForecastDay {
    date: NaiveDate,
    susceptible: f64,
    active: f64,
    recovered: f64,
}

#[derive(Serialize)]
struct ForecastJson<'a> {
    region: &'a str,
    params: &'a ModelParams,
    start_date: NaiveDate,
    end_date: NaiveDate,
    step_days: f64,
    days: Vec<ForecastDay>,
    endpoint_active: f64,
    endpoint_recovered: f64,
    active_ci95: Interval,
    active_ci99: Interval,
    recovered_ci95: Interval,
    recovered_ci99: Interval,
}

/// Forecast as pretty-printed JSON with per-day arrays.
pub fn write_forecast_json<W: Write>(result: &ForecastResult, mut out: W) -> Result<()> {
    let doc = ForecastJson {
        region: &result.region,
        params: &result.params,
        start_date: result.start_date,
        end_date: result.end_date(),
        step_days: result.trajectory.step_days,
        days: result
            .dates()
            .zip(&result.trajectory.states)
            .map(|(date, s)| ForecastDay {
                date,
                susceptible: s.s,
                active: s.i,
                recovered: s.r,
            })
            .collect(),
        endpoint_active: result.endpoint_active,
        endpoint_recovered: result.endpoint_recovered,
        active_ci95: result.active_ci95,
        active_ci99: result.active_ci99,
        recovered_ci95: result.recovered_ci95,
        recovered_ci99: result.recovered_ci99,
    };
    serde_json::to_writer_pretty(&mut out, &doc).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

/// `date,susceptible,active,recovered`
pub fn write_forecast_csv<W: Write>(result: &ForecastResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["date", "susceptible", "active", "recovered"])?;
    for (date, s) in result.dates().zip(&result.trajectory.states) {
        w.write_record([
            date.to_string(),
            s.s.to_string(),
            s.i.to_string(),
            s.r.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `date,observed_active,predicted_active,observed_removed,predicted_removed`
pub fn write_validation_csv<W: Write>(report: &ValidationReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "date",
        "observed_active",
        "predicted_active",
        "observed_removed",
        "predicted_removed",
    ])?;
    for k in 0..report.dates.len() {
        w.write_record([
            report.dates[k].to_string(),
            report.observed_active[k].to_string(),
            report.predicted_active[k].to_string(),
            report.observed_removed[k].to_string(),
            report.predicted_removed[k].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_validation_json<W: Write>(report: &ValidationReport, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, report).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

/// `rho,peak_infected,peak_day,die_out_day`; an empty `die_out_day` means the
/// infection outlasted the horizon.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["rho", "peak_infected", "peak_day", "die_out_day"])?;
    for r in rows {
        w.write_record([
            r.rho.to_string(),
            r.peak_infected.to_string(),
            r.peak_day.to_string(),
            r.die_out_day.map(|d| d.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep_json<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}
