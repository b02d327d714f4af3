//! How the peak and die-out day move as the intervention level rises.

use epifit::forecast::intervention_sweep;
use epifit::model::{CompartmentState, ModelParams};

fn main() -> epifit::Result<()> {
    let base = ModelParams::new(0.2, 1.0 / 14.0, 0.0, 1000.0)?;
    let init = CompartmentState::from_infected(1000.0, 5.0, 0.0);
    let rhos = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
    println!(
        "{:>5} {:>10} {:>9} {:>8}",
        "rho", "peak", "peak_day", "die_out"
    );
    for row in intervention_sweep(&base, &init, 400, &rhos)? {
        let die = row.die_out_day.map_or("-".to_string(), |d| d.to_string());
        println!(
            "{:>5.1} {:>10.1} {:>9} {:>8}",
            row.rho, row.peak_infected, row.peak_day, die
        );
    }
    Ok(())
}
