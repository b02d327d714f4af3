//! Replays the observation window with given parameters and scores the fit.
//!
//! `cargo run --example validate_region -- [region] [beta] [rho]`

use std::fs;
use std::path::Path;

use epifit::data::{derive_epi_series, find_region, load_demographics, parse_case_csv};
use epifit::forecast::validate;
use epifit::model::ModelParams;

fn main() -> epifit::Result<()> {
    let mut args = std::env::args().skip(1);
    let region = args.next().unwrap_or_else(|| "India".into());
    let beta: f64 = args.next().map_or(0.1738, |s| s.parse().expect("beta"));
    let rho: f64 = args.next().map_or(0.432, |s| s.parse().expect("rho"));

    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let cases = parse_case_csv(fs::File::open(data.join("synthetic_cases_2020.csv"))?)?;
    let demo = load_demographics(fs::File::open(data.join("demographics_census2011.csv"))?)?;
    let series = derive_epi_series(
        &cases.records,
        &region,
        "2020-06-05".parse().unwrap(),
        "2020-07-25".parse().unwrap(),
    )?;
    let record = find_region(&demo, &region)?;
    let params = ModelParams::new(beta, 1.0 / 14.0, rho, record.population as f64)?;
    let report = validate(&series, &params, record)?;

    println!("{region} {} .. {}", report.start_date, report.end_date);
    println!(
        "active  MAE {:.0}  RMSE {:.0}",
        report.mae_active, report.rmse_active
    );
    println!(
        "removed MAE {:.0}  RMSE {:.0}",
        report.mae_removed, report.rmse_removed
    );
    for k in (0..report.dates.len()).step_by(10) {
        println!(
            "{}  active {:>9.0} / {:>9.0}  removed {:>9.0} / {:>9.0}",
            report.dates[k],
            report.observed_active[k],
            report.predicted_active[k],
            report.observed_removed[k],
            report.predicted_removed[k]
        );
    }
    Ok(())
}
