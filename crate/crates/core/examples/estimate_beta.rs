//! Transmission rate from the bundled case series.
//!
//! `cargo run --example estimate_beta -- [region]`

use std::fs;
use std::path::Path;

use epifit::data::{derive_epi_series, find_region, load_demographics, parse_case_csv};
use epifit::estimation::{beta_samples_with, cross_validated_beta, Increment, DEFAULT_FOLDS};

fn main() -> epifit::Result<()> {
    let region = std::env::args().nth(1).unwrap_or_else(|| "India".into());
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let cases = parse_case_csv(fs::File::open(data.join("synthetic_cases_2020.csv"))?)?;
    let demo = load_demographics(fs::File::open(data.join("demographics_census2011.csv"))?)?;
    let series = derive_epi_series(
        &cases.records,
        &region,
        "2020-06-05".parse().unwrap(),
        "2020-07-25".parse().unwrap(),
    )?;
    let n = find_region(&demo, &region)?.population as f64;

    for increment in [Increment::ActiveChange, Increment::NewConfirmed] {
        let samples =
            beta_samples_with(&series, 1.0 / 14.0, n, n - series.confirmed[0], increment)?;
        let est = cross_validated_beta(&samples.samples, DEFAULT_FOLDS)?;
        println!(
            "{region} {increment:?}: beta {:.4} (slope {:.2e}/day, cv error {:.3e}, {} samples)",
            est.beta_hat,
            est.fit.alpha1,
            est.cv_error,
            samples.samples.len()
        );
    }
    Ok(())
}
