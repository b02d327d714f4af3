//! Transmission-rate extraction, regression, and intervention calibration.

mod beta;
mod calibrate;
mod regression;

pub use beta::{
    beta_samples, beta_samples_with, cross_validated_beta, BetaEstimate, BetaSample, BetaSamples,
    Increment, SkippedDay, DEFAULT_FOLDS,
};
pub use calibrate::{
    active_sse, calibrate_rho, calibrate_rho_with_step, rho_grid, CalibrationResult,
    DEFAULT_GRID_STEP,
};
pub use regression::{contiguous_folds, fit_linear, k_fold_cv, CrossValidation, RegressionFit};
