//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Criteria 7 and 8 read the bundled case fixture. Point
//! `EPIFIT_ACCEPTANCE_CASES` at another case CSV (same schema) to run them on
//! different data.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use chrono::NaiveDate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use epifit::data::{
    derive_epi_series, find_region, load_demographics, parse_case_csv, EpiSeries, RegionRecord,
};
use epifit::estimation::{
    beta_samples, calibrate_rho, cross_validated_beta, fit_linear, DEFAULT_FOLDS,
};
use epifit::forecast::{forecast_region, intervention_sweep};
use epifit::model::{integrate, CompartmentState, ModelParams, DEFAULT_STEP_DAYS};

const GAMMA: f64 = 1.0 / 14.0;

// Published per-region (beta, rho, endpoint active cases on 2020-09-30).
const PUBLISHED: [(&str, f64, f64, f64); 10] = [
    ("India", 0.1738, 0.432, 2_850_000.0),
    ("Uttar Pradesh", 0.1908, 0.445, 224_367.0),
    ("Maharashtra", 0.1443, 0.338, 684_599.0),
    ("Tamil Nadu", 0.1713, 0.460, 206_312.0),
    ("West Bengal", 0.2072, 0.505, 154_212.0),
    ("Telangana", 0.2086, 0.440, 244_048.0),
    ("Gujarat", 0.1556, 0.420, 44_656.0),
    ("Bihar", 0.2666, 0.610, 101_569.0),
    ("Arunachal Pradesh", 0.1815, 0.310, 23_425.0),
    ("Assam", 0.2331, 0.550, 72_292.0),
];

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

fn case_csv_path() -> PathBuf {
    std::env::var_os("EPIFIT_ACCEPTANCE_CASES")
        .map(PathBuf::from)
        .unwrap_or_else(|| data_dir().join("synthetic_cases_2020.csv"))
}

fn date(s: &str) -> NaiveDate {
    s.parse().unwrap()
}

struct Fixture {
    records: Vec<epifit::data::CaseRecord>,
    demographics: Vec<RegionRecord>,
}

impl Fixture {
    fn load() -> Self {
        let cases = fs::read(case_csv_path()).expect("case CSV readable");
        let demo = fs::read(data_dir().join("demographics_census2011.csv")).unwrap();
        Self {
            records: parse_case_csv(&cases[..]).expect("case CSV parses").records,
            demographics: load_demographics(&demo[..]).unwrap(),
        }
    }

    fn series(&self, region: &str) -> (EpiSeries, &RegionRecord) {
        let series = derive_epi_series(
            &self.records,
            region,
            date("2020-06-05"),
            date("2020-07-25"),
        )
        .expect("window present");
        (series, find_region(&self.demographics, region).unwrap())
    }
}

fn classical_peak() -> Outcome {
    let params = ModelParams::new(0.2, GAMMA, 0.0, 1000.0).unwrap();
    let init = CompartmentState::from_infected(1000.0, 5.0, 0.0);
    let t0 = Instant::now();
    let traj = integrate(&init, &params, 200, DEFAULT_STEP_DAYS).unwrap();
    let peak = traj.peak();
    let elapsed = t0.elapsed();
    let pass = peak.infected > 275.0
        && peak.infected <= 285.0
        && peak.day.abs_diff(48) <= 3
        && elapsed < Duration::from_secs(1);
    Outcome::new(
        pass,
        format!(
            "peak {:.2} on day {} in {:?}",
            peak.infected, peak.day, elapsed
        ),
    )
}

fn sweep_landmarks() -> Outcome {
    let base = ModelParams::new(0.2, GAMMA, 0.0, 1000.0).unwrap();
    let init = CompartmentState::from_infected(1000.0, 5.0, 0.0);
    let rows = intervention_sweep(&base, &init, 400, &[0.2, 0.4, 0.8]).unwrap();
    let near = |v: f64, target: f64, tol: f64| (v - target).abs() <= tol;
    let die = |k: usize| rows[k].die_out_day.map_or(f64::INFINITY, |d| d as f64);
    let mut checks = vec![
        near(rows[0].peak_infected, 195.0, 5.0),
        near(rows[0].peak_day as f64, 62.0, 3.0),
        near(die(0), 190.0, 5.0),
        near(rows[1].peak_infected, 99.0, 5.0),
        near(rows[1].peak_day as f64, 95.0, 5.0),
        near(die(1), 262.0, 5.0),
        // "peak 5": the initial infected count is the maximum
        rows[2].peak_infected.round() == 5.0,
        near(die(2), 50.0, 5.0),
    ];
    let full = integrate(&init, &base.with_rho(1.0).unwrap(), 400, DEFAULT_STEP_DAYS).unwrap();
    let s_drift = full
        .states
        .iter()
        .map(|s| (s.s - 995.0).abs())
        .fold(0.0, f64::max);
    checks.push(s_drift <= 1e-9 * 1000.0);
    let mut detail = rows
        .iter()
        .map(|r| {
            format!(
                "rho {}: peak {:.1} day {} die-out {:?}",
                r.rho, r.peak_infected, r.peak_day, r.die_out_day
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    detail.push_str(&format!("; rho 1: max |S-995| {s_drift:.1e}"));
    Outcome::new(checks.iter().all(|&c| c), detail)
}

fn conservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let n = 10f64.powf(rng.gen_range(2.0..9.5));
        let i0 = n * rng.gen_range(1e-7..0.5);
        let r0 = (n - i0) * rng.gen_range(0.0..0.5);
        let params = ModelParams::new(
            rng.gen_range(0.0..1.5),
            rng.gen_range(0.01..0.5),
            rng.gen_range(0.0..=1.0),
            n,
        )
        .unwrap();
        let init = CompartmentState::from_infected(n, i0, r0);
        let horizon = rng.gen_range(1..=200);
        let traj = integrate(&init, &params, horizon, DEFAULT_STEP_DAYS).unwrap();
        for s in &traj.states {
            worst = worst.max((s.s + s.i + s.r - n).abs() / n);
        }
    }
    Outcome::new(
        worst <= 1e-9,
        format!("worst |S+I+R-N|/N over 1000 runs: {worst:.2e}"),
    )
}

fn beta_sample_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0_f64;
    let mut compared = 0;
    for _ in 0..100 {
        let days = rng.gen_range(2..80);
        let n: f64 = rng.gen_range(1e4..1e9);
        let mut confirmed = vec![rng.gen_range(10.0..n * 1e-3)];
        let mut removed = vec![confirmed[0] * rng.gen_range(0.0..0.5)];
        for _ in 1..days {
            let c = confirmed.last().unwrap() + rng.gen_range(0.0..n * 1e-4);
            let prev_r = *removed.last().unwrap();
            let r = prev_r + rng.gen_range(0.0..=(c - prev_r) * 0.2);
            confirmed.push(c);
            removed.push(r);
        }
        let active: Vec<f64> = confirmed.iter().zip(&removed).map(|(c, r)| c - r).collect();
        let gamma = rng.gen_range(0.02..0.3);
        let s_init = n - confirmed[0];
        let series = EpiSeries::new(
            "random",
            date("2020-01-01"),
            confirmed.clone(),
            active.clone(),
            removed,
        )
        .unwrap();
        let got = beta_samples(&series, gamma, n, s_init).unwrap();
        for sample in &got.samples {
            let t = sample.day_index;
            let s_t = n - confirmed[0] - (confirmed[t] - confirmed[0]);
            let expect = ((active[t + 1] - active[t]) / active[t] + gamma) * n / s_t;
            worst = worst.max((sample.beta - expect).abs() / expect.abs().max(f64::MIN_POSITIVE));
            compared += 1;
        }
    }
    Outcome::new(
        worst <= 1e-12,
        format!("{compared} samples, worst relative error {worst:.2e}"),
    )
}

fn regression_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0_f64;
    let mut worst_line_var = 0.0_f64;
    for _ in 0..1000 {
        let n = rng.gen_range(3..40);
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)))
            .collect();
        let fit = fit_linear(&pts).unwrap();
        // Cramer's rule on [n Sx; Sx Sxx] [a0 a1]' = [Sy Sxy]'
        let nf = n as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let det = nf * sxx - sx * sx;
        let a0 = (sy * sxx - sx * sxy) / det;
        let a1 = (nf * sxy - sx * sy) / det;
        worst = worst
            .max((fit.alpha0 - a0).abs())
            .max((fit.alpha1 - a1).abs());

        let (b0, b1) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let line: Vec<(f64, f64)> = pts.iter().map(|&(x, _)| (x, b0 + b1 * x)).collect();
        worst_line_var = worst_line_var.max(fit_linear(&line).unwrap().residual_variance);
    }
    // "zero" residual variance up to accumulated rounding on O(10) values
    Outcome::new(
        worst <= 1e-10 && worst_line_var <= 1e-24,
        format!(
            "worst coefficient gap {worst:.2e}; worst exact-line variance {worst_line_var:.2e}"
        ),
    )
}

fn recover_rho() -> Outcome {
    let step = 0.001;
    let mut details = Vec::new();
    let mut pass = true;
    for rho in [0.1, 0.3, 0.432, 0.7, 0.9] {
        let params = ModelParams::new(0.3, GAMMA, rho, 1e6).unwrap();
        let init = CompartmentState::from_infected(1e6, 200.0, 50.0);
        let traj = integrate(&init, &params, 50, DEFAULT_STEP_DAYS).unwrap();
        let active = traj.infected();
        let removed = traj.removed();
        let confirmed = active.iter().zip(&removed).map(|(a, r)| a + r).collect();
        let series = EpiSeries::new("sim", date("2020-06-05"), confirmed, active, removed).unwrap();
        let got = calibrate_rho(&series, &params.with_rho(0.0).unwrap(), step).unwrap();
        pass &= (got.rho - rho).abs() <= step + 1e-12;
        details.push(format!("{rho}->{}", got.rho));
    }
    Outcome::new(pass, details.join(", "))
}

struct Fitted {
    beta: f64,
    rho: f64,
}

fn fit_region(series: &EpiSeries, demo: &RegionRecord) -> epifit::Result<Fitted> {
    let n = demo.population as f64;
    let samples = beta_samples(series, GAMMA, n, n - series.confirmed[0])?;
    let est = cross_validated_beta(&samples.samples, DEFAULT_FOLDS)?;
    let params = ModelParams::new(est.beta_hat, GAMMA, 0.0, n)?;
    let cal = calibrate_rho(series, &params, 0.001)?;
    Ok(Fitted {
        beta: est.beta_hat,
        rho: cal.rho,
    })
}

fn published_estimates(fx: &Fixture) -> Outcome {
    let mut hits = 0;
    let mut india_ok = false;
    let mut details = Vec::new();
    for (region, beta, rho, _) in PUBLISHED {
        let (series, demo) = fx.series(region);
        match fit_region(&series, demo) {
            Ok(f) => {
                let ok = (f.beta - beta).abs() <= 0.01 && (f.rho - rho).abs() <= 0.02;
                hits += usize::from(ok);
                if region == "India" {
                    india_ok = ok;
                }
                details.push(format!("{region} {:.4}/{:.3}", f.beta, f.rho));
            }
            Err(e) => details.push(format!("{region} error: {e}")),
        }
    }
    Outcome::new(
        india_ok && hits >= 7,
        format!("{hits}/10 within tolerance; {}", details.join(", ")),
    )
}

fn published_endpoints(fx: &Fixture) -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    for (region, beta, rho, expected) in PUBLISHED {
        if !matches!(
            region,
            "India" | "Uttar Pradesh" | "Maharashtra" | "Gujarat"
        ) {
            continue;
        }
        let (series, demo) = fx.series(region);
        let params = ModelParams::new(beta, GAMMA, rho, demo.population as f64).unwrap();
        let fc = forecast_region(&series, demo, &params, date("2020-09-30")).unwrap();
        let rel = (fc.endpoint_active - expected) / expected;
        pass &= rel.abs() <= 0.15;
        details.push(format!(
            "{region} {:.0} vs {expected:.0} ({:+.1}%)",
            fc.endpoint_active,
            100.0 * rel
        ));
    }
    Outcome::new(pass, details.join(", "))
}

fn ci_properties(fx: &Fixture) -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    for (region, beta, rho, _) in PUBLISHED {
        let (series, demo) = fx.series(region);
        let params = ModelParams::new(beta, GAMMA, rho, demo.population as f64).unwrap();
        let fc = forecast_region(&series, demo, &params, date("2020-09-30")).unwrap();
        let active = fc.trajectory.infected();
        let removed = fc.trajectory.removed();
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
        pass &= fc.active_ci99.contains(&fc.active_ci95)
            && fc.recovered_ci99.contains(&fc.recovered_ci95)
            && fc.active_ci95.low <= fc.active_ci95.high
            && fc.recovered_ci95.low <= fc.recovered_ci95.high;
        for ci in [fc.active_ci95, fc.active_ci99] {
            pass &= rel(ci.midpoint(), mean(&active)) <= 1e-9;
        }
        for ci in [fc.recovered_ci95, fc.recovered_ci99] {
            pass &= rel(ci.midpoint(), mean(&removed)) <= 1e-9;
        }
        if region == "India" {
            let below = fc.active_ci95.midpoint() < fc.endpoint_active;
            pass &= below;
            details.push(format!(
                "India ci95 midpoint {:.0} < endpoint {:.0}: {below}",
                fc.active_ci95.midpoint(),
                fc.endpoint_active
            ));
        }
    }
    Outcome::new(pass, format!("10 forecasts checked; {}", details.join("")))
}

fn run_pipeline(config: &Path, region: &str, out_dir: &Path) -> i32 {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    epifit::cli::run_command_with_io(
        [
            "epifit",
            "pipeline",
            "--config",
            config.to_str().unwrap(),
            "--region",
            region,
            "--output-dir",
            out_dir.to_str().unwrap(),
        ],
        &mut out,
        &mut err,
    )
}

fn read_dir_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}

fn determinism() -> Outcome {
    let config = data_dir().join("fixtures.toml");
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let mut codes = Vec::new();
    for (region, ..) in PUBLISHED {
        codes.push(run_pipeline(&config, region, &a));
        codes.push(run_pipeline(&config, region, &b));
    }
    if codes.iter().any(|&c| c != 0) {
        return Outcome::new(false, format!("pipeline exit codes {codes:?}"));
    }
    let (fa, fb) = (read_dir_bytes(&a), read_dir_bytes(&b));
    Outcome::new(
        fa == fb && fa.len() == 10 * 5,
        format!("{} output files compared", fa.len()),
    )
}

fn main() {
    let start = Instant::now();
    let fixture = Fixture::load();
    let criteria: Vec<Criterion> = vec![
        ("classical peak", Box::new(classical_peak)),
        (
            "intervention sweep",
            Box::new(sweep_landmarks),
        ),
        ("conservation", Box::new(conservation)),
        ("beta sample oracle", Box::new(beta_sample_oracle)),
        ("regression oracle", Box::new(regression_oracle)),
        ("simulate then recover rho", Box::new(recover_rho)),
        (
            "published beta and rho",
            Box::new(|| published_estimates(&fixture)),
        ),
        (
            "published endpoints",
            Box::new(|| published_endpoints(&fixture)),
        ),
        ("confidence intervals", Box::new(|| ci_properties(&fixture))),
        ("pipeline determinism", Box::new(determinism)),
    ];

    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let mut outcome = check();
        if k + 1 == criteria.len() {
            let total = start.elapsed();
            outcome.pass &= total < Duration::from_secs(60);
            outcome
                .detail
                .push_str(&format!("; suite runtime {total:.2?}"));
        }
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!outcome.pass);
        println!("criterion {:>2} {tag}: {name}: {}", k + 1, outcome.detail);
    }
    println!(
        "acceptance: {}/{} passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
