//! Regenerates the bundled synthetic case file.
//!
//! ```bash
//! cargo run -p epifit --example make_synthetic_cases -- crates/core/data/synthetic_cases_2020.csv
//! ```
//!
//! Daily new confirmations and removals are noisy fixed shares of the active
//! count. India's series is walked backwards from the publicly reported
//! 2020-07-25 totals; the other regions are walked forwards from a drawn
//! 2020-06-05 state. Apart from that one India row, every number comes from a
//! fixed-seed generator and is not observed data.

use std::fs::File;
use std::io::BufWriter;

use chrono::{Duration, NaiveDate};
use epifit::data::{write_case_csv, CaseRecord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_200_725;
const DAYS: i64 = 51;

const REGIONS: [(&str, u64); 10] = [
    ("India", 1_210_569_573),
    ("Uttar Pradesh", 199_812_341),
    ("Maharashtra", 112_374_333),
    ("Tamil Nadu", 72_147_030),
    ("West Bengal", 91_276_115),
    ("Telangana", 35_003_674),
    ("Gujarat", 60_439_692),
    ("Bihar", 104_099_452),
    ("Arunachal Pradesh", 1_383_727),
    ("Assam", 31_205_576),
];

/// Noisy daily new confirmations and removals for a given active count.
fn daily_flows(rng: &mut ChaCha8Rng, active: f64, new_rate: f64, removal_rate: f64) -> (u64, u64) {
    let new_cases = (new_rate * active * (1.0 + rng.gen_range(-0.1..0.1))).round() as u64;
    let removals = (removal_rate * active * (1.0 + rng.gen_range(-0.1..0.1))).round() as u64;
    (new_cases, removals)
}

/// Walks backwards from known end-of-window totals.
fn backward_from(rng: &mut ChaCha8Rng, end: (u64, u64, u64)) -> Vec<(u64, u64, u64)> {
    let removal_rate = rng.gen_range(0.05..0.065);
    let new_rate = removal_rate + rng.gen_range(0.02..0.04);
    let death_share = end.2 as f64 / (end.1 + end.2) as f64;
    let mut rows = vec![end];
    for _ in 1..DAYS {
        let (c, rec, dec) = *rows.last().unwrap();
        let (new_cases, removals) =
            daily_flows(rng, (c - rec - dec) as f64, new_rate, removal_rate);
        let deaths = (removals as f64 * death_share).round() as u64;
        let prev = (
            c.checked_sub(new_cases).expect("confirmed went negative"),
            rec.checked_sub(removals - deaths)
                .expect("recovered went negative"),
            dec.checked_sub(deaths).expect("deceased went negative"),
        );
        assert!(prev.0 > prev.1 + prev.2, "active went non-positive");
        rows.push(prev);
    }
    rows.reverse();
    rows
}

/// Walks forwards from a drawn start-of-window state.
fn forward_from_draw(rng: &mut ChaCha8Rng, population: u64) -> Vec<(u64, u64, u64)> {
    let confirmed = (population as f64 * rng.gen_range(5e-5..5e-4)).round() as u64;
    let active_share = rng.gen_range(0.35..0.55);
    let death_share = rng.gen_range(0.01..0.05);
    let removed = (confirmed as f64 * (1.0 - active_share)).round() as u64;
    let deceased = (removed as f64 * death_share).round() as u64;
    let removal_rate = rng.gen_range(0.05..0.08);
    let new_rate = removal_rate + rng.gen_range(0.0..0.05);

    let mut rows = vec![(confirmed, removed - deceased, deceased)];
    for _ in 1..DAYS {
        let (c, rec, dec) = *rows.last().unwrap();
        let (new_cases, removals) =
            daily_flows(rng, (c - rec - dec) as f64, new_rate, removal_rate);
        let deaths = (removals as f64 * death_share).round() as u64;
        let next = (c + new_cases, rec + removals - deaths, dec + deaths);
        assert!(next.0 > next.1 + next.2, "active went non-positive");
        rows.push(next);
    }
    rows
}

fn region_series(
    rng: &mut ChaCha8Rng,
    region: &str,
    population: u64,
    start: NaiveDate,
) -> Vec<CaseRecord> {
    let rows = if region == "India" {
        backward_from(rng, (1_336_861, 849_432, 31_358))
    } else {
        forward_from_draw(rng, population)
    };
    rows.into_iter()
        .enumerate()
        .map(|(k, (confirmed, recovered, deceased))| CaseRecord {
            date: start + Duration::days(k as i64),
            region: region.to_string(),
            confirmed,
            recovered,
            deceased,
        })
        .collect()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "synthetic_cases_2020.csv".to_string());
    let start = NaiveDate::from_ymd_opt(2020, 6, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut records = Vec::new();
    for (region, population) in REGIONS {
        records.extend(region_series(&mut rng, region, population, start));
    }
    write_case_csv(&records, BufWriter::new(File::create(&path)?))?;
    println!("wrote {} rows to {path}", records.len());
    Ok(())
}
