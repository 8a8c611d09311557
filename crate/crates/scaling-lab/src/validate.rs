//! The three-stage validation framework, executed per analysis cell:
//!
//! - Stage I: k-fold cross-validated held-out Huber loss for each law.
//! - Stage II: goodness-of-fit F-test of the log-linearized law against
//!   the mean-response model, at significance `gof_alpha`.
//! - Stage III: Vuong's likelihood-ratio test between the two laws,
//!   run only when both pass Stage II, at significance `vuong_alpha`.
//!
//! A Shapiro-Wilk screen on each law's residuals is recorded alongside;
//! it is advisory and never gates the stages.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{fit, mean_huber_loss, FitConfig, FitResult};
use crate::ingest::{CellKey, ScoreSeries};
use crate::laws::{linearize, ModelKind};
use crate::stats::{f_cdf, normal_cdf, ols, shapiro_wilk, NormalityReport};

/// Which law Vuong's test prefers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preference {
    Exponential,
    PowerLaw,
    Neither,
}

/// Stage I: per-fold held-out mean Huber losses and their mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub kind: ModelKind,
    pub fold_losses: Vec<f64>,
    pub mean_loss: f64,
    pub k: usize,
    pub seed: u64,
}

/// Stage II: F-test of the linearized law (slope + intercept) against
/// the intercept-only mean-response model. `applicable` is false when
/// the log transform left too few points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub kind: ModelKind,
    pub applicable: bool,
    pub f_stat: f64,
    pub df_reduced: usize,
    pub df_exact: usize,
    pub ssr_reduced: f64,
    pub ssr_exact: f64,
    pub p_value: f64,
    pub pass: bool,
    pub dropped_points: usize,
}

impl GofReport {
    fn not_applicable(kind: ModelKind, dropped_points: usize) -> Self {
        GofReport {
            kind,
            applicable: false,
            f_stat: 0.0,
            df_reduced: 0,
            df_exact: 0,
            ssr_reduced: 0.0,
            ssr_exact: 0.0,
            p_value: 1.0,
            pass: false,
            dropped_points,
        }
    }
}

/// Stage III: Vuong's non-nested likelihood-ratio test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VuongReport {
    /// Positive favors the exponential law.
    pub v_stat: f64,
    /// Two-sided.
    pub p_value: f64,
    pub n: usize,
    pub preferred: Preference,
    pub significant: bool,
}

/// Everything the framework decided for one law in one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelOutcome {
    pub fit: FitResult,
    pub stage1: CvReport,
    pub gof: GofReport,
    pub normality: NormalityReport,
}

/// The full per-cell outcome, one row-pair of a results table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationVerdict {
    pub key: CellKey,
    pub exponential: ModelOutcome,
    pub power_law: ModelOutcome,
    /// Present when Stage III ran and the test was well defined.
    pub vuong: Option<VuongReport>,
    /// True exactly when both laws passed Stage II.
    pub stage3_run: bool,
    /// The Stage III winner at the stringent level, if any.
    pub effective_law: Option<ModelKind>,
}

impl ValidationVerdict {
    pub fn outcome(&self, kind: ModelKind) -> &ModelOutcome {
        match kind {
            ModelKind::Exponential => &self.exponential,
            ModelKind::PowerLaw => &self.power_law,
        }
    }

    /// The law that passed Stage II alone, when exactly one did.
    pub fn sole_qualifier(&self) -> Option<ModelKind> {
        match (self.exponential.gof.pass, self.power_law.gof.pass) {
            (true, false) => Some(ModelKind::Exponential),
            (false, true) => Some(ModelKind::PowerLaw),
            _ => None,
        }
    }
}

/// All knobs of one framework run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameworkConfig {
    pub fit: FitConfig,
    pub folds: usize,
    /// Master seed; fold assignment and fit jitters derive from it.
    pub seed: u64,
    pub gof_alpha: f64,
    pub vuong_alpha: f64,
    pub normality_alpha: f64,
    /// Log guard for the Stage II linearization.
    pub lin_eps: f64,
}

impl Default for FrameworkConfig {
    fn default() -> Self {
        FrameworkConfig {
            fit: FitConfig::default(),
            folds: 5,
            seed: 42,
            gof_alpha: 0.05,
            vuong_alpha: 0.005,
            normality_alpha: 0.05,
            lin_eps: 1e-9,
        }
    }
}

/// FNV-1a over bytes; stable across runs, platforms and thread counts.
fn fnv1a(bytes: &[u8], seed: u64) -> u64 {
    let mut hash = 0xcbf29ce484222325u64 ^ seed;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Role-specific sub-seed derived from a master seed.
pub fn derive_seed(master: u64, role: &str) -> u64 {
    fnv1a(role.as_bytes(), master)
}

/// Cell-specific seed, so parallel runs stay order-independent.
pub fn cell_seed(master: u64, key: &CellKey) -> u64 {
    fnv1a(key.id().as_bytes(), master)
}

/// Partition `0..n` into `k` folds: seeded uniform shuffle, then
/// round-robin assignment. Fold sizes differ by at most one.
pub fn make_folds(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InvalidConfig(format!(
            "need at least 2 folds, got {k}"
        )));
    }
    if n < k {
        return Err(Error::TooFewPoints { need: k, have: n, k });
    }
    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    indices.shuffle(&mut rng);
    let mut folds = vec![Vec::with_capacity(n / k + 1); k];
    for (pos, idx) in indices.into_iter().enumerate() {
        folds[pos % k].push(idx);
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}

/// Stage I: for each fold, fit on the complement and evaluate the mean
/// held-out Huber loss; the report's mean is the unweighted mean over
/// folds.
pub fn stage1_cv(
    series: &ScoreSeries,
    kind: ModelKind,
    cfg: &FitConfig,
    k: usize,
    seed: u64,
) -> Result<CvReport> {
    let folds = make_folds(series.len(), k, seed)?;
    let mut fold_losses = Vec::with_capacity(k);
    for (fold_idx, fold) in folds.iter().enumerate() {
        let held_out: Vec<_> = fold.iter().map(|&i| series.points[i]).collect();
        let train: Vec<_> = series
            .points
            .iter()
            .enumerate()
            .filter(|(i, _)| !fold.contains(i))
            .map(|(_, p)| *p)
            .collect();
        let train_series = ScoreSeries::new(series.key.clone(), train).map_err(|e| {
            Error::Stage1Failed {
                fold: fold_idx,
                source: Box::new(e),
            }
        })?;
        let fitted = fit(&train_series, kind, cfg).map_err(|e| Error::Stage1Failed {
            fold: fold_idx,
            source: Box::new(e),
        })?;
        fold_losses.push(mean_huber_loss(&fitted, &held_out, cfg.huber_delta));
    }
    let mean_loss = fold_losses.iter().sum::<f64>() / fold_losses.len() as f64;
    Ok(CvReport {
        kind,
        fold_losses,
        mean_loss,
        k,
        seed,
    })
}

/// F-test of a slope-plus-intercept line against the intercept-only
/// mean model on `(u, v)` pairs. Returns `(f_stat, p, ssr_reduced,
/// ssr_exact)` with df = (m - 1) - (m - 2) = 1 over m - 2.
pub fn f_test_against_mean(pairs: &[(f64, f64)]) -> Result<(f64, f64, f64, f64)> {
    let m = pairs.len();
    if m < 3 {
        return Err(Error::TooFewForOls(m));
    }
    let exact = ols(pairs)?;
    let v_mean = pairs.iter().map(|p| p.1).sum::<f64>() / m as f64;
    let ssr_reduced: f64 = pairs.iter().map(|&(_, v)| (v - v_mean) * (v - v_mean)).sum();
    let df_exact = m - 2;

    // An exact line gives ssr_exact = 0; the floor keeps the ratio finite.
    let numerator = (ssr_reduced - exact.ssr).max(0.0);
    let f_stat = numerator / (exact.ssr.max(1e-18) / df_exact as f64);
    let p = 1.0 - f_cdf(f_stat, 1, df_exact)?;
    Ok((f_stat, p, ssr_reduced, exact.ssr))
}

/// Stage II: linearize the series with the law's fitted offset and run
/// the F-test. A failed linearization is recorded as not applicable.
pub fn stage2_gof(
    series: &ScoreSeries,
    kind: ModelKind,
    fitted: &FitResult,
    gof_alpha: f64,
    lin_eps: f64,
) -> Result<GofReport> {
    debug_assert_eq!(fitted.kind, kind);
    let lin = match linearize(series, kind, fitted.params.offset(), lin_eps) {
        Ok(lin) => lin,
        Err(Error::LinearizationFailed { total, kept, .. }) => {
            return Ok(GofReport::not_applicable(kind, total - kept));
        }
        Err(e) => return Err(e),
    };
    let m = lin.pairs.len();
    if m < 3 {
        return Ok(GofReport::not_applicable(kind, lin.dropped));
    }
    let (f_stat, p_value, ssr_reduced, ssr_exact) = f_test_against_mean(&lin.pairs)?;
    Ok(GofReport {
        kind,
        applicable: true,
        f_stat,
        df_reduced: m - 1,
        df_exact: m - 2,
        ssr_reduced,
        ssr_exact,
        p_value,
        pass: p_value < gof_alpha,
        dropped_points: lin.dropped,
    })
}

static VUONG_INVOCATIONS: AtomicU64 = AtomicU64::new(0);

/// Number of times `vuong` has been invoked in this process. Used by
/// gating tests to confirm Stage III runs exactly when it should.
#[doc(hidden)]
pub fn vuong_invocation_count() -> u64 {
    VUONG_INVOCATIONS.load(Ordering::SeqCst)
}

/// Stage III: Vuong's likelihood-ratio test on per-point log-likelihood
/// differences `d_i = ll_exp_i - ll_pow_i` (positive favors the
/// exponential law). Uses the population (1/n) variance and a two-sided
/// normal p-value.
pub fn vuong(ll_exp: &[f64], ll_pow: &[f64], vuong_alpha: f64) -> Result<VuongReport> {
    VUONG_INVOCATIONS.fetch_add(1, Ordering::SeqCst);
    if ll_exp.len() != ll_pow.len() {
        return Err(Error::LoglikLengthMismatch(ll_exp.len(), ll_pow.len()));
    }
    let n = ll_exp.len();
    if n < 2 {
        return Err(Error::Data(format!(
            "Vuong's test needs at least 2 points, got {n}"
        )));
    }
    let d: Vec<f64> = ll_exp.iter().zip(ll_pow).map(|(a, b)| a - b).collect();
    let nf = n as f64;
    let mean = d.iter().sum::<f64>() / nf;
    let var = d.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / nf;
    if var < 1e-18 {
        return Err(Error::IndistinguishableModels);
    }
    let v_stat = nf.sqrt() * mean / var.sqrt();
    let p_value = 2.0 * (1.0 - normal_cdf(v_stat.abs()));
    let significant = p_value < vuong_alpha;
    let preferred = if !significant {
        Preference::Neither
    } else if v_stat > 0.0 {
        Preference::Exponential
    } else {
        Preference::PowerLaw
    };
    Ok(VuongReport {
        v_stat,
        p_value,
        n,
        preferred,
        significant,
    })
}

fn run_one_model(
    series: &ScoreSeries,
    kind: ModelKind,
    cfg: &FrameworkConfig,
) -> Result<ModelOutcome> {
    let mut fit_cfg = cfg.fit.clone();
    fit_cfg.seed = derive_seed(cfg.seed, "fit");
    let fitted = fit(series, kind, &fit_cfg)?;
    let stage1 = stage1_cv(
        series,
        kind,
        &fit_cfg,
        cfg.folds,
        derive_seed(cfg.seed, "folds"),
    )?;
    // Advisory screen; an exactly-zero-variance residual vector means the
    // fit is exact and there is nothing to test, which we record as a
    // trivial pass.
    let normality = match shapiro_wilk(&fitted.residuals, cfg.normality_alpha) {
        Ok(report) => report,
        Err(Error::DegenerateSample) => NormalityReport {
            w_stat: 1.0,
            p_value: 1.0,
            n: fitted.residuals.len(),
            pass: true,
        },
        Err(e) => return Err(e),
    };
    let gof = stage2_gof(series, kind, &fitted, cfg.gof_alpha, cfg.lin_eps)?;
    Ok(ModelOutcome {
        fit: fitted,
        stage1,
        gof,
        normality,
    })
}

/// Run the full framework on one cell: fit both laws, Stage I for both,
/// the normality screen, Stage II for both, and Stage III only when
/// both laws qualify. With exactly one qualifier it is reported as the
/// sole qualifier and no effective law is declared.
pub fn run_framework(series: &ScoreSeries, cfg: &FrameworkConfig) -> Result<ValidationVerdict> {
    let exponential = run_one_model(series, ModelKind::Exponential, cfg)?;
    let power_law = run_one_model(series, ModelKind::PowerLaw, cfg)?;

    let stage3_run = exponential.gof.pass && power_law.gof.pass;
    let vuong_report = if stage3_run {
        match vuong(
            &exponential.fit.loglik,
            &power_law.fit.loglik,
            cfg.vuong_alpha,
        ) {
            Ok(report) => Some(report),
            Err(Error::IndistinguishableModels) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };

    let effective_law = vuong_report.and_then(|v| match v.preferred {
        Preference::Exponential if v.significant => Some(ModelKind::Exponential),
        Preference::PowerLaw if v.significant => Some(ModelKind::PowerLaw),
        _ => None,
    });

    Ok(ValidationVerdict {
        key: series.key.clone(),
        exponential,
        power_law,
        vuong: vuong_report,
        stage3_run,
        effective_law,
    })
}

/// Run the framework over many cells in parallel with per-cell derived
/// seeds; results come back sorted by cell key, independent of thread
/// count.
pub fn run_framework_all(
    series: &[ScoreSeries],
    cfg: &FrameworkConfig,
) -> Vec<(CellKey, Result<ValidationVerdict>)> {
    let mut results: Vec<(CellKey, Result<ValidationVerdict>)> = series
        .par_iter()
        .map(|s| {
            let mut cell_cfg = cfg.clone();
            cell_cfg.seed = cell_seed(cfg.seed, &s.key);
            (s.key.clone(), run_framework(s, &cell_cfg))
        })
        .collect();
    results.sort_by(|a, b| a.0.cmp(&b.0));
    results
}
