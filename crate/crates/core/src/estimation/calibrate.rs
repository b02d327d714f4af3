//! Grid search for the intervention level that best reproduces observed
//! active cases.

use serde::{Deserialize, Serialize};

use crate::data::EpiSeries;
use crate::error::{ensure_finite, Error, Result};
use crate::model::{integrate, ModelParams, DEFAULT_STEP_DAYS};

pub const DEFAULT_GRID_STEP: f64 = 0.001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub rho: f64,
    /// Sum of squared differences between modelled and observed active cases.
    pub objective: f64,
    pub grid_step: f64,
}

/// Grid points `k / m` for `k = 0..=m`, where `m = 1 / grid_step`.
pub fn rho_grid(grid_step: f64) -> Result<Vec<f64>> {
    ensure_finite("grid_step", grid_step)?;
    if grid_step <= 0.0 || grid_step > 1.0 {
        return Err(Error::invalid(format!(
            "grid_step must lie in (0, 1], got {grid_step}"
        )));
    }
    let m = (1.0 / grid_step).round();
    if (m * grid_step - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "grid_step {grid_step} does not divide 1"
        )));
    }
    let m = m as usize;
    Ok((0..=m).map(|k| k as f64 / m as f64).collect())
}

/// SSE of the model's active cases against `observed.active`, integrating
/// from the first observed day.
pub fn active_sse(observed: &EpiSeries, params: &ModelParams, step_days: f64) -> Result<f64> {
    if observed.len() < 2 {
        return Err(Error::invalid("calibration window needs at least two days"));
    }
    let initial = observed.state_at(0, params.population)?;
    let traj = integrate(&initial, params, (observed.len() - 1) as u32, step_days)?;
    Ok(traj
        .states
        .iter()
        .zip(&observed.active)
        .map(|(s, a)| (s.i - a).powi(2))
        .sum())
}

pub fn calibrate_rho(
    observed: &EpiSeries,
    params_without_rho: &ModelParams,
    grid_step: f64,
) -> Result<CalibrationResult> {
    calibrate_rho_with_step(observed, params_without_rho, grid_step, DEFAULT_STEP_DAYS)
}

/// Exhaustive search over the rho grid. Ties go to the smaller rho.
pub fn calibrate_rho_with_step(
    observed: &EpiSeries,
    params_without_rho: &ModelParams,
    grid_step: f64,
    step_days: f64,
) -> Result<CalibrationResult> {
    if observed.is_empty() {
        return Err(Error::invalid("calibration window is empty"));
    }
    let grid = rho_grid(grid_step)?;
    let mut best: Option<CalibrationResult> = None;
    for rho in grid {
        let params = params_without_rho.with_rho(rho)?;
        let objective = active_sse(observed, &params, step_days)?;
        if best.is_none_or(|b| objective < b.objective) {
            best = Some(CalibrationResult {
                rho,
                objective,
                grid_step,
            });
        }
    }
    Ok(best.expect("grid is never empty"))
}
