//! Ordinary least squares on one predictor, with contiguous k-fold
//! cross-validation.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// `y = alpha0 + alpha1 * x` fitted by least squares.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub alpha0: f64,
    pub alpha1: f64,
    /// Residual sum of squares over `n - 2`; zero when `n == 2`.
    pub residual_variance: f64,
    pub n: usize,
}

impl RegressionFit {
    #[must_use]
    pub fn predict(&self, x: f64) -> f64 {
        self.alpha0 + self.alpha1 * x
    }
}

/// Least-squares line through `points`.
///
/// Uses centered sums, so large offsets in `x` (day numbers, epoch dates) do
/// not cost precision.
pub fn fit_linear(points: &[(f64, f64)]) -> Result<RegressionFit> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    for &(x, y) in points {
        ensure_finite("x", x)?;
        ensure_finite("y", y)?;
    }
    let nf = n as f64;
    let x_mean = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let y_mean = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y) in points {
        let dx = x - x_mean;
        sxx += dx * dx;
        sxy += dx * (y - y_mean);
    }
    if sxx == 0.0 {
        return Err(Error::invalid(
            "all x values are identical; slope is undefined",
        ));
    }
    let alpha1 = sxy / sxx;
    let alpha0 = y_mean - alpha1 * x_mean;
    let sse: f64 = points
        .iter()
        .map(|&(x, y)| {
            let e = y - alpha0 - alpha1 * x;
            e * e
        })
        .sum();
    let residual_variance = if n > 2 { sse / (nf - 2.0) } else { 0.0 };
    Ok(RegressionFit {
        alpha0,
        alpha1,
        residual_variance,
        n,
    })
}

/// Held-out error of each fold and the pooled mean squared error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub folds: usize,
    /// Mean squared error on each held-out block.
    pub fold_errors: Vec<f64>,
    /// Squared error averaged over every held-out point.
    pub mean_squared_error: f64,
}

/// Index ranges of `folds` contiguous blocks covering `0..n`. The first
/// `n % folds` blocks get one extra element.
pub fn contiguous_folds(n: usize, folds: usize) -> Vec<std::ops::Range<usize>> {
    let base = n / folds;
    let extra = n % folds;
    let mut start = 0;
    (0..folds)
        .map(|k| {
            let len = base + usize::from(k < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

/// K-fold cross-validation of [`fit_linear`] with contiguous, unshuffled
/// blocks, in the order given.
pub fn k_fold_cv(points: &[(f64, f64)], folds: usize) -> Result<CrossValidation> {
    if folds < 2 {
        return Err(Error::invalid(format!("folds must be >= 2, got {folds}")));
    }
    if points.len() < folds {
        return Err(Error::TooFewSamples {
            needed: folds,
            got: points.len(),
        });
    }
    let mut fold_errors = Vec::with_capacity(folds);
    let mut total = 0.0;
    for range in contiguous_folds(points.len(), folds) {
        let train: Vec<(f64, f64)> = points[..range.start]
            .iter()
            .chain(&points[range.end..])
            .copied()
            .collect();
        let fit = fit_linear(&train)?;
        let sse: f64 = points[range.clone()]
            .iter()
            .map(|&(x, y)| (y - fit.predict(x)).powi(2))
            .sum();
        total += sse;
        fold_errors.push(sse / range.len() as f64);
    }
    Ok(CrossValidation {
        folds,
        fold_errors,
        mean_squared_error: total / points.len() as f64,
    })
}
