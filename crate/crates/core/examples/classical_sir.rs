//! Unmitigated outbreak in a town of 1000 with five initial cases.

use epifit::model::{
    integrate, reproduction_number, CompartmentState, ModelParams, DEFAULT_STEP_DAYS,
};

fn main() -> epifit::Result<()> {
    let params = ModelParams::new(0.2, 1.0 / 14.0, 0.0, 1000.0)?;
    let init = CompartmentState::from_infected(1000.0, 5.0, 0.0);
    let traj = integrate(&init, &params, 200, DEFAULT_STEP_DAYS)?;

    println!("R0 = {:.2}", reproduction_number(&params)?);
    for s in traj.states.iter().step_by(20) {
        println!(
            "day {:>3}  S {:>7.1}  I {:>7.1}  R {:>7.1}",
            s.t, s.s, s.i, s.r
        );
    }
    let peak = traj.peak();
    println!("peak {:.1} infected on day {}", peak.infected, peak.day);
    Ok(())
}
