//! Fitting and forecasting with an SIR model that carries an intervention
//! factor.
//!
//! - [`model`]: state, parameters, right-hand sides and the RK4 integrator.
//! - [`data`]: case and demographics CSV ingestion.
//! - [`estimation`]: daily transmission-rate samples, least-squares trend
//!   with cross-validation, and grid calibration of the intervention level.
//! - [`forecast`]: projections with confidence intervals, validation and
//!   intervention sweeps.
//! - [`cli`]: the `epifit` command-line front end.

pub mod cli;
pub mod data;
pub mod error;
pub mod estimation;
pub mod forecast;
pub mod model;

pub use error::{Error, Result};
