//! Plants an intervention level in simulated data and finds it again.

use epifit::data::EpiSeries;
use epifit::estimation::calibrate_rho;
use epifit::model::{integrate, CompartmentState, ModelParams, DEFAULT_STEP_DAYS};

fn main() -> epifit::Result<()> {
    let truth = ModelParams::new(0.25, 1.0 / 14.0, 0.432, 5e6)?;
    let init = CompartmentState::from_infected(5e6, 300.0, 40.0);
    let traj = integrate(&init, &truth, 50, DEFAULT_STEP_DAYS)?;
    let active = traj.infected();
    let removed = traj.removed();
    let confirmed = active.iter().zip(&removed).map(|(a, r)| a + r).collect();
    let series = EpiSeries::new(
        "simulated",
        "2020-06-05".parse().unwrap(),
        confirmed,
        active,
        removed,
    )?;

    let fit = calibrate_rho(&series, &truth.with_rho(0.0)?, 0.001)?;
    println!(
        "planted rho 0.432, recovered {} (SSE {:.3e})",
        fit.rho, fit.objective
    );
    Ok(())
}
