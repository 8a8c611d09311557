//! Robust scaling-law estimation: minimize total Huber loss with
//! deterministic multi-start simplex search.
//!
//! Start points come from a log-linear warm start (regress the
//! offset-shifted log response on `x` or `ln x`), a flat start at the
//! sample mean, and seeded multiplicative jitters of the warm start.
//! Each start runs a simplex minimization followed by shrinking-step
//! restarts, which polishes noiseless fits to essentially zero loss.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::ScoreSeries;
use crate::laws::{LawParams, ModelKind};
use crate::optim::nelder_mead;
use crate::stats::ols;

/// Floor applied to the Gaussian MLE variance so exact fits keep a
/// finite log-likelihood.
pub const SIGMA2_FLOOR: f64 = 1e-18;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitConfig {
    /// Huber transition point (quadratic inside, linear outside).
    pub huber_delta: f64,
    /// Number of start points for the multi-start search.
    pub n_starts: usize,
    /// Iteration cap per simplex run.
    pub max_iters: usize,
    /// Convergence tolerance on the loss.
    pub tol: f64,
    pub seed: u64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            huber_delta: 1.0,
            n_starts: 16,
            max_iters: 2000,
            tol: 1e-12,
            seed: 42,
        }
    }
}

/// A fitted scaling law with its residual diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub kind: ModelKind,
    pub params: LawParams,
    /// y_i - prediction_i, in series order.
    pub residuals: Vec<f64>,
    /// Total Huber loss at the returned parameters.
    pub huber_loss: f64,
    /// Gaussian MLE variance of the residuals (floored).
    pub sigma2: f64,
    /// Per-point Gaussian log-likelihoods.
    pub loglik: Vec<f64>,
    pub converged: bool,
}

impl FitResult {
    pub fn predict(&self, x: f64) -> f64 {
        self.params.predict(x)
    }
}

/// The standard Huber loss: quadratic up to `delta`, linear beyond.
pub fn huber(r: f64, delta: f64) -> f64 {
    debug_assert!(delta > 0.0);
    let a = r.abs();
    if a <= delta {
        0.5 * r * r
    } else {
        delta * (a - 0.5 * delta)
    }
}

/// Gaussian variance (floored) and per-point log-likelihoods of a
/// residual vector.
pub fn loglik_gaussian(residuals: &[f64]) -> (f64, Vec<f64>) {
    assert!(!residuals.is_empty());
    let n = residuals.len() as f64;
    let sigma2 = (residuals.iter().map(|r| r * r).sum::<f64>() / n).max(SIGMA2_FLOOR);
    let log_norm = -0.5 * (2.0 * std::f64::consts::PI * sigma2).ln();
    let ll = residuals
        .iter()
        .map(|r| log_norm - r * r / (2.0 * sigma2))
        .collect();
    (sigma2, ll)
}

fn total_huber_loss(series: &ScoreSeries, kind: ModelKind, theta: &[f64], delta: f64) -> f64 {
    let params = LawParams::from_components(kind, theta[0], theta[1], theta[2]);
    let mut total = 0.0;
    for obs in &series.points {
        let pred = params.predict(obs.size_b);
        if !pred.is_finite() {
            return f64::INFINITY;
        }
        total += huber(obs.inconsistency - pred, delta);
    }
    total
}

/// Log-linear warm start: fix the offset at 0.9 * min(y) and regress
/// ln(y - offset) on x (exponential) or ln x (power law). Falls back to
/// the flat start when too few points survive the log.
fn warm_start(series: &ScoreSeries, kind: ModelKind) -> [f64; 3] {
    let min_y = series
        .points
        .iter()
        .map(|p| p.inconsistency)
        .fold(f64::INFINITY, f64::min);
    let offset0 = 0.9 * min_y;
    let pairs: Vec<(f64, f64)> = series
        .points
        .iter()
        .filter_map(|p| {
            let shifted = p.inconsistency - offset0;
            if shifted > 0.0 {
                let u = match kind {
                    ModelKind::PowerLaw => p.size_b.ln(),
                    ModelKind::Exponential => p.size_b,
                };
                Some((u, shifted.ln()))
            } else {
                None
            }
        })
        .collect();
    match ols(&pairs) {
        Ok(line) => [line.intercept.exp(), line.slope, offset0],
        Err(_) => flat_start(series),
    }
}

/// Zero-amplitude start predicting the sample mean everywhere.
fn flat_start(series: &ScoreSeries) -> [f64; 3] {
    let mean = series.points.iter().map(|p| p.inconsistency).sum::<f64>()
        / series.points.len() as f64;
    [0.0, 0.0, mean]
}

fn initial_step(theta: &[f64]) -> [f64; 3] {
    [
        0.25 * theta[0].abs() + 0.05,
        0.25 * theta[1].abs() + 0.05,
        0.25 * theta[2].abs() + 0.05,
    ]
}

/// Fit one law to a series by minimizing total Huber loss over all
/// start points. Deterministic for a fixed seed.
pub fn fit(series: &ScoreSeries, kind: ModelKind, cfg: &FitConfig) -> Result<FitResult> {
    if cfg.huber_delta <= 0.0 || cfg.tol <= 0.0 || cfg.n_starts == 0 {
        return Err(Error::InvalidConfig(
            "huber_delta, tol and n_starts must be positive".into(),
        ));
    }
    if series.len() < 3 {
        return Err(Error::Data(format!(
            "cell {} has {} points, need at least 3 to fit",
            series.key,
            series.len()
        )));
    }
    let first = series.points[0].size_b;
    if series.points.iter().all(|p| p.size_b == first) {
        return Err(Error::DegenerateSeries);
    }

    let objective = |theta: &[f64]| total_huber_loss(series, kind, theta, cfg.huber_delta);

    let warm = warm_start(series, kind);
    let mut starts: Vec<[f64; 3]> = vec![warm, flat_start(series)];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let jitter_span = 4.0f64.ln() - 0.25f64.ln();
    while starts.len() < cfg.n_starts {
        let mut s = warm;
        for v in s.iter_mut() {
            let factor = (0.25f64.ln() + rng.random::<f64>() * jitter_span).exp();
            *v *= factor;
        }
        starts.push(s);
    }

    let mut best: Option<(Vec<f64>, f64, bool)> = None;
    for start in &starts {
        if !objective(start).is_finite() {
            continue;
        }
        let mut run = nelder_mead(objective, start, &initial_step(start), cfg.max_iters, cfg.tol);
        // Shrinking-step restarts recover from premature simplex collapse
        // and push noiseless fits to essentially exact parameters.
        let polish_tol = cfg.tol * 1e-3;
        for round in 1..=6 {
            let prev = run.value;
            let scale = 0.1f64.powi(round);
            let step = [
                (0.25 * run.point[0].abs() + 0.05) * scale,
                (0.25 * run.point[1].abs() + 0.05) * scale,
                (0.25 * run.point[2].abs() + 0.05) * scale,
            ];
            let again = nelder_mead(objective, &run.point, &step, cfg.max_iters, polish_tol);
            if again.value < run.value {
                run = again;
            }
            if prev - run.value <= polish_tol * (1.0 + run.value.abs()) && round >= 2 {
                break;
            }
        }
        if !run.value.is_finite() {
            continue;
        }
        let better = match &best {
            None => true,
            Some((_, v, _)) => run.value < *v,
        };
        if better {
            best = Some((run.point, run.value, run.converged));
        }
    }

    let (theta, huber_loss, converged) = best.ok_or_else(|| Error::FitFailed {
        kind,
        reason: "every start point diverged or overflowed".into(),
    })?;

    let params = LawParams::from_components(kind, theta[0], theta[1], theta[2]);
    let residuals: Vec<f64> = series
        .points
        .iter()
        .map(|p| p.inconsistency - params.predict(p.size_b))
        .collect();
    if residuals.iter().any(|r| !r.is_finite()) {
        return Err(Error::FitFailed {
            kind,
            reason: "best parameters produce non-finite residuals".into(),
        });
    }
    let (sigma2, loglik) = loglik_gaussian(&residuals);

    Ok(FitResult {
        kind,
        params,
        residuals,
        huber_loss,
        sigma2,
        loglik,
        converged,
    })
}

/// Mean Huber loss of a fitted law over an arbitrary point set.
pub fn mean_huber_loss(
    fit: &FitResult,
    points: &[crate::ingest::Observation],
    delta: f64,
) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    points
        .iter()
        .map(|p| huber(p.inconsistency - fit.predict(p.size_b), delta))
        .sum::<f64>()
        / points.len() as f64
}
