use chrono::NaiveDate;
use proptest::prelude::*;

use epifit::data::EpiSeries;
use epifit::estimation::{
    beta_samples, calibrate_rho, cross_validated_beta, fit_linear, k_fold_cv, BetaSample,
};
use epifit::model::{integrate, CompartmentState, ModelParams, DEFAULT_STEP_DAYS};

fn start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2020, 6, 5).unwrap()
}

fn simulated(params: &ModelParams, i0: f64, days: u32) -> EpiSeries {
    let init = CompartmentState::from_infected(params.population, i0, 0.0);
    let traj = integrate(&init, params, days, DEFAULT_STEP_DAYS).unwrap();
    let active = traj.infected();
    let removed = traj.removed();
    let confirmed = active.iter().zip(&removed).map(|(a, r)| a + r).collect();
    EpiSeries::new("sim", start(), confirmed, active, removed).unwrap()
}

fn points() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 3..40).prop_filter("x must vary", |p| {
        p.iter().any(|q| (q.0 - p[0].0).abs() > 1e-3)
    })
}

proptest! {
    #[test]
    fn residuals_are_orthogonal(pts in points()) {
        let fit = fit_linear(&pts).unwrap();
        let (mut sum, mut dot) = (0.0, 0.0);
        for &(x, y) in &pts {
            let e = y - fit.predict(x);
            sum += e;
            dot += e * x;
        }
        prop_assert!(sum.abs() < 1e-8);
        prop_assert!(dot.abs() < 1e-6);
        prop_assert!(fit.residual_variance >= 0.0);
    }

    #[test]
    fn slope_ignores_shifts(pts in points(), dx in -1e3f64..1e3, dy in -1e3f64..1e3) {
        let a = fit_linear(&pts).unwrap();
        let shifted: Vec<_> = pts.iter().map(|&(x, y)| (x + dx, y + dy)).collect();
        let b = fit_linear(&shifted).unwrap();
        prop_assert!((a.alpha1 - b.alpha1).abs() < 1e-8 * (1.0 + a.alpha1.abs()));
    }

    #[test]
    fn constant_samples_give_that_constant(c in 0.01f64..1.0, n in 10usize..60) {
        let samples: Vec<_> = (0..n).map(|t| BetaSample { day_index: t, beta: c }).collect();
        let est = cross_validated_beta(&samples, 10).unwrap();
        prop_assert!((est.beta_hat - c).abs() < 1e-12);
        prop_assert!(est.cv_error < 1e-20);
    }
}

#[test]
fn leave_one_out_on_a_line_is_exact() {
    let pts: Vec<(f64, f64)> = (0..20)
        .map(|t| (t as f64, 0.2 - 0.003 * t as f64))
        .collect();
    assert!(k_fold_cv(&pts, 20).unwrap().mean_squared_error < 1e-24);
}

#[test]
fn samples_recover_effective_rate_on_model_data() {
    // small daily growth keeps the forward difference close to the rate
    let params = ModelParams::new(0.2, 1.0 / 14.0, 0.5, 1e7).unwrap();
    let series = simulated(&params, 1000.0, 30);
    let n = params.population;
    let got = beta_samples(&series, params.gamma, n, n - series.confirmed[0]).unwrap();
    assert_eq!(got.samples.len(), 30);
    for s in &got.samples {
        let rel = (s.beta - params.effective_beta()).abs() / params.effective_beta();
        assert!(rel < 0.02, "day {}: {}", s.day_index, s.beta);
    }
}

#[test]
fn calibration_is_deterministic() {
    let params = ModelParams::new(0.25, 1.0 / 14.0, 0.37, 1e6).unwrap();
    let series = simulated(&params, 100.0, 40);
    let base = params.with_rho(0.0).unwrap();
    let a = calibrate_rho(&series, &base, 0.001).unwrap();
    let b = calibrate_rho(&series, &base, 0.001).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.rho, 0.37);
}

#[test]
fn two_day_series_is_too_short_for_cross_validation() {
    let series = EpiSeries::new(
        "short",
        start(),
        vec![10.0, 12.0],
        vec![8.0, 9.0],
        vec![2.0, 3.0],
    )
    .unwrap();
    let samples = beta_samples(&series, 0.1, 1e5, 1e5 - 10.0).unwrap();
    assert_eq!(samples.samples.len(), 1);
    let err = cross_validated_beta(&samples.samples, 10).unwrap_err();
    assert!(err.to_string().contains("too few samples"), "{err}");
}
