//! Projects a region forward from the end of its observed window and
//! prints the result as CSV.
//!
//! `cargo run --example forecast_region -- [region] [beta] [rho]`

use std::fs;
use std::path::Path;

use epifit::data::{derive_epi_series, find_region, load_demographics, parse_case_csv};
use epifit::forecast::{forecast_region, write_forecast_csv};
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
    let fc = forecast_region(&series, record, &params, "2020-09-30".parse().unwrap())?;

    eprintln!(
        "{region}: active {:.0} and removed {:.0} on {}",
        fc.endpoint_active,
        fc.endpoint_recovered,
        fc.end_date()
    );
    eprintln!(
        "active 95% [{:.0}, {:.0}]  99% [{:.0}, {:.0}]",
        fc.active_ci95.low, fc.active_ci95.high, fc.active_ci99.low, fc.active_ci99.high
    );
    write_forecast_csv(&fc, std::io::stdout().lock())
}
