//! Verdict rendering (Markdown, CSV, JSON) and plot-data emission with
//! margin-of-error bands.
//!
//! Markdown mirrors the two-block results-table layout: per
//! (metric, decoding) group, one row per (family, law) with Stage I
//! held-out losses per dataset followed by Stage II/III outcomes per
//! dataset. Losses render in scientific notation with a two-decimal
//! mantissa (`1.89e-03`); losses above the high-loss threshold are
//! flagged. CSV and JSON carry every field losslessly.
//!
//! The MOE band is `t_quantile((1 + level) / 2, n - 3)` times the
//! residual standard error with denominator n - 3 (three fitted
//! parameters), drawn as a constant-width band around the fitted curve
//! on a log-spaced grid.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::FitResult;
use crate::ingest::{CellKey, Observation, ScoreSeries};
use crate::laws::{LawParams, ModelKind};
use crate::stats::t_quantile;
use crate::validate::{FrameworkConfig, Preference, ValidationVerdict};

/// Sampled fitted curve with its constant-width confidence band.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    pub kind: ModelKind,
    pub grid: Vec<f64>,
    pub curve: Vec<f64>,
    pub band_lo: Vec<f64>,
    pub band_hi: Vec<f64>,
    pub points: Vec<Observation>,
    /// None when the band is undefined (n <= 3).
    pub moe: Option<f64>,
}

/// Build the plot series for one fitted law.
pub fn moe_band(
    series: &ScoreSeries,
    fitted: &FitResult,
    level: f64,
    grid_n: usize,
    x_range: (f64, f64),
) -> Result<PlotSeries> {
    let (lo, hi) = x_range;
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "confidence level {level} outside (0, 1)"
        )));
    }
    if grid_n < 2 {
        return Err(Error::InvalidConfig(format!("grid size {grid_n} below 2")));
    }
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidConfig(format!(
            "invalid x range [{lo}, {hi}]"
        )));
    }

    let n = fitted.residuals.len();
    let moe = if n > 3 {
        let df = n - 3;
        let ssr: f64 = fitted.residuals.iter().map(|r| r * r).sum();
        let sd = (ssr / df as f64).sqrt();
        Some(t_quantile(0.5 * (1.0 + level), df)? * sd)
    } else {
        None
    };

    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    let grid: Vec<f64> = (0..grid_n)
        .map(|i| (ln_lo + (ln_hi - ln_lo) * i as f64 / (grid_n - 1) as f64).exp())
        .collect();
    let curve: Vec<f64> = grid.iter().map(|&x| fitted.predict(x)).collect();
    let half = moe.unwrap_or(0.0);
    let band_lo: Vec<f64> = curve.iter().map(|&y| y - half).collect();
    let band_hi: Vec<f64> = curve.iter().map(|&y| y + half).collect();

    Ok(PlotSeries {
        kind: fitted.kind,
        grid,
        curve,
        band_lo,
        band_hi,
        points: series.points.clone(),
        moe,
    })
}

/// Plot CSV: one `cell_id,kind,x,y_fit,y_lo,y_hi` row per grid point.
pub fn plot_curve_csv(cell: &CellKey, series: &[PlotSeries]) -> String {
    let mut out = String::from("cell_id,kind,x,y_fit,y_lo,y_hi\n");
    for ps in series {
        for i in 0..ps.grid.len() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                cell.id(),
                ps.kind,
                ps.grid[i],
                ps.curve[i],
                ps.band_lo[i],
                ps.band_hi[i]
            ));
        }
    }
    out
}

/// Companion observations CSV: `cell_id,x,y_obs` rows.
pub fn plot_observations_csv(cell: &CellKey, points: &[Observation]) -> String {
    let mut out = String::from("cell_id,x,y_obs\n");
    for p in points {
        out.push_str(&format!("{},{},{}\n", cell.id(), p.size_b, p.inconsistency));
    }
    out
}

/// Scientific notation with a two-decimal mantissa and signed two-digit
/// exponent, the table cell format: 0.00189 -> "1.89e-03".
pub fn format_sci(x: f64) -> String {
    if x == 0.0 {
        return "0.00e+00".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.2e}");
    let (mantissa, exponent) = s.split_once('e').expect("{:e} always has an exponent");
    let e: i32 = exponent.parse().expect("exponent is an integer");
    format!(
        "{}e{}{:02}",
        mantissa,
        if e < 0 { '-' } else { '+' },
        e.abs()
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Markdown,
    Csv,
    Json,
}

/// Echo of every knob that shaped a report, embedded in the output so a
/// run can be reproduced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub seed: u64,
    pub folds: usize,
    pub huber_delta: f64,
    pub n_starts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub gof_alpha: f64,
    pub vuong_alpha: f64,
    pub normality_alpha: f64,
    pub lin_eps: f64,
    pub high_loss_threshold: f64,
    pub ci_level: f64,
    pub grid_points: usize,
    /// How the confidence band is constructed.
    pub moe_method: String,
}

impl ConfigEcho {
    pub fn new(cfg: &FrameworkConfig, high_loss_threshold: f64, ci_level: f64, grid_points: usize) -> Self {
        ConfigEcho {
            seed: cfg.seed,
            folds: cfg.folds,
            huber_delta: cfg.fit.huber_delta,
            n_starts: cfg.fit.n_starts,
            max_iters: cfg.fit.max_iters,
            tol: cfg.fit.tol,
            gof_alpha: cfg.gof_alpha,
            vuong_alpha: cfg.vuong_alpha,
            normality_alpha: cfg.normality_alpha,
            lin_eps: cfg.lin_eps,
            high_loss_threshold,
            ci_level,
            grid_points,
            moe_method: "residual standard error (denominator n-3) times the two-sided t quantile; constant width around the fitted curve".to_string(),
        }
    }
}

/// A batch of verdicts plus the configuration echo, ready to render.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportDocument {
    pub verdicts: Vec<ValidationVerdict>,
    pub format: ReportFormat,
    pub generated_at: String,
    pub config: ConfigEcho,
}

impl ReportDocument {
    pub fn new(
        mut verdicts: Vec<ValidationVerdict>,
        format: ReportFormat,
        config: ConfigEcho,
    ) -> Self {
        verdicts.sort_by(|a, b| a.key.cmp(&b.key));
        ReportDocument {
            verdicts,
            format,
            generated_at: chrono::Utc::now().to_rfc3339(),
            config,
        }
    }
}

/// Render the document in its chosen format.
pub fn render(doc: &ReportDocument) -> String {
    match doc.format {
        ReportFormat::Markdown => render_markdown(doc),
        ReportFormat::Csv => render_csv(doc),
        ReportFormat::Json => {
            serde_json::to_string_pretty(&JsonReport::from_document(doc)).expect("report is serializable")
        }
    }
}

fn law_cell(verdict: &ValidationVerdict, kind: ModelKind) -> String {
    let outcome = verdict.outcome(kind);
    if !outcome.gof.applicable {
        return "n/a".to_string();
    }
    let mut cell = if outcome.gof.pass { "pass" } else { "FAIL" }.to_string();
    if verdict.effective_law == Some(kind) {
        cell.push_str(" (*)");
    }
    cell
}

fn loss_cell(verdict: &ValidationVerdict, kind: ModelKind, threshold: f64) -> String {
    let loss = verdict.outcome(kind).stage1.mean_loss;
    let text = format_sci(loss);
    if loss > threshold {
        format!("**{text}**")
    } else {
        text
    }
}

fn render_markdown(doc: &ReportDocument) -> String {
    let mut out = String::new();
    out.push_str("# Scaling-law validation report\n\n");
    out.push_str(&format!(
        "generated_at: {}  \nseed: {}, folds: {}, huber_delta: {}, gof_alpha: {}, vuong_alpha: {}, normality_alpha: {}, high_loss_threshold: {}\n",
        doc.generated_at,
        doc.config.seed,
        doc.config.folds,
        doc.config.huber_delta,
        doc.config.gof_alpha,
        doc.config.vuong_alpha,
        doc.config.normality_alpha,
        doc.config.high_loss_threshold,
    ));
    out.push_str(&format!("moe: {}\n", doc.config.moe_method));

    // Group cells: one table per (metric, decoding), datasets as columns.
    let mut groups: BTreeMap<(String, String), Vec<&ValidationVerdict>> = BTreeMap::new();
    for v in &doc.verdicts {
        groups
            .entry((v.key.metric.clone(), v.key.decoding.clone()))
            .or_default()
            .push(v);
    }

    for ((metric, decoding), verdicts) in groups {
        let mut datasets: Vec<String> = verdicts.iter().map(|v| v.key.dataset.clone()).collect();
        datasets.sort();
        datasets.dedup();
        let mut families: Vec<String> = verdicts.iter().map(|v| v.key.family.clone()).collect();
        families.sort();
        families.dedup();

        let by_cell: BTreeMap<(&str, &str), &ValidationVerdict> = verdicts
            .iter()
            .map(|v| ((v.key.family.as_str(), v.key.dataset.as_str()), *v))
            .collect();

        out.push_str(&format!("\n## metric: {metric}, decoding: {decoding}\n\n"));
        out.push_str("| family | scaling law |");
        for d in &datasets {
            out.push_str(&format!(" loss:{d} |"));
        }
        for d in &datasets {
            out.push_str(&format!(" gof:{d} |"));
        }
        out.push('\n');
        out.push_str("|---|---|");
        out.push_str(&"---|".repeat(datasets.len() * 2));
        out.push('\n');

        for family in &families {
            for kind in [ModelKind::Exponential, ModelKind::PowerLaw] {
                out.push_str(&format!("| {family} | {kind} |"));
                for d in &datasets {
                    match by_cell.get(&(family.as_str(), d.as_str())) {
                        Some(v) => out.push_str(&format!(
                            " {} |",
                            loss_cell(v, kind, doc.config.high_loss_threshold)
                        )),
                        None => out.push_str(" - |"),
                    }
                }
                for d in &datasets {
                    match by_cell.get(&(family.as_str(), d.as_str())) {
                        Some(v) => out.push_str(&format!(" {} |", law_cell(v, kind))),
                        None => out.push_str(" - |"),
                    }
                }
                out.push('\n');
            }
        }
    }
    out
}

const CSV_HEADER: &str = "family,dataset,metric,decoding,law,amplitude,shape,offset,huber_loss,converged,fold_losses,mean_loss,high_loss,gof_applicable,gof_f_stat,gof_df_reduced,gof_df_exact,gof_ssr_reduced,gof_ssr_exact,gof_p,gof_pass,gof_dropped,normality_w,normality_p,normality_pass,stage3_run,vuong_ran,vuong_v,vuong_p,vuong_n,vuong_preferred,effective_law";

fn render_csv(doc: &ReportDocument) -> String {
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    writer
        .write_record(CSV_HEADER.split(','))
        .expect("writing to memory cannot fail");
    for verdict in &doc.verdicts {
        for kind in [ModelKind::Exponential, ModelKind::PowerLaw] {
            let outcome = verdict.outcome(kind);
            let (amp, shape, offset) = outcome.fit.params.components();
            let fold_losses = outcome
                .stage1
                .fold_losses
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(";");
            let (vuong_ran, vuong_v, vuong_p, vuong_n, vuong_pref) = match verdict.vuong {
                Some(v) => (
                    "true".to_string(),
                    v.v_stat.to_string(),
                    v.p_value.to_string(),
                    v.n.to_string(),
                    preference_str(v.preferred).to_string(),
                ),
                None => (
                    "false".to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ),
            };
            let record = [
                verdict.key.family.clone(),
                verdict.key.dataset.clone(),
                verdict.key.metric.clone(),
                verdict.key.decoding.clone(),
                kind.label().to_string(),
                amp.to_string(),
                shape.to_string(),
                offset.to_string(),
                outcome.fit.huber_loss.to_string(),
                outcome.fit.converged.to_string(),
                fold_losses,
                outcome.stage1.mean_loss.to_string(),
                (outcome.stage1.mean_loss > doc.config.high_loss_threshold).to_string(),
                outcome.gof.applicable.to_string(),
                outcome.gof.f_stat.to_string(),
                outcome.gof.df_reduced.to_string(),
                outcome.gof.df_exact.to_string(),
                outcome.gof.ssr_reduced.to_string(),
                outcome.gof.ssr_exact.to_string(),
                outcome.gof.p_value.to_string(),
                outcome.gof.pass.to_string(),
                outcome.gof.dropped_points.to_string(),
                outcome.normality.w_stat.to_string(),
                outcome.normality.p_value.to_string(),
                outcome.normality.pass.to_string(),
                verdict.stage3_run.to_string(),
                vuong_ran.clone(),
                vuong_v.clone(),
                vuong_p.clone(),
                vuong_n.clone(),
                vuong_pref.clone(),
                effective_law_str(verdict.effective_law).to_string(),
            ];
            writer.write_record(&record).expect("memory write");
        }
    }
    String::from_utf8(writer.into_inner().expect("memory flush")).expect("csv is utf-8")
}

pub fn preference_str(p: Preference) -> &'static str {
    match p {
        Preference::Exponential => "exponential",
        Preference::PowerLaw => "power_law",
        Preference::Neither => "neither",
    }
}

pub fn effective_law_str(law: Option<ModelKind>) -> &'static str {
    match law {
        Some(ModelKind::Exponential) => "exponential",
        Some(ModelKind::PowerLaw) => "power_law",
        None => "none",
    }
}

// --- JSON schema ---------------------------------------------------------
//
// {config:{...}, generated_at, cells:[{family,dataset,metric,decoding,
//   models:{exponential:{params:{C,beta,D}, stage1:{fold_losses,mean_loss},
//           gof:{f_stat,df:[dr,de],p,pass,applicable}, normality:{w,p,pass}},
//          power_law:{params:{A,alpha,B}, ...}},
//   vuong:{v,p,preferred,ran}, effective_law}]}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub config: ConfigEcho,
    pub generated_at: String,
    pub cells: Vec<JsonCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonCell {
    pub family: String,
    pub dataset: String,
    pub metric: String,
    pub decoding: String,
    pub models: JsonModels,
    pub vuong: JsonVuong,
    pub effective_law: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonModels {
    pub exponential: JsonModel<JsonExpParams>,
    pub power_law: JsonModel<JsonPowParams>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonExpParams {
    #[serde(rename = "C")]
    pub c: f64,
    pub beta: f64,
    #[serde(rename = "D")]
    pub d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonPowParams {
    #[serde(rename = "A")]
    pub a: f64,
    pub alpha: f64,
    #[serde(rename = "B")]
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonModel<P> {
    pub params: P,
    pub stage1: JsonStage1,
    pub gof: JsonGof,
    pub normality: JsonNormality,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonStage1 {
    pub fold_losses: Vec<f64>,
    pub mean_loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonGof {
    pub f_stat: f64,
    pub df: [usize; 2],
    pub p: f64,
    pub pass: bool,
    pub applicable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonNormality {
    pub w: f64,
    pub p: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonVuong {
    pub v: Option<f64>,
    pub p: Option<f64>,
    pub preferred: String,
    pub ran: bool,
}

impl JsonReport {
    pub fn from_document(doc: &ReportDocument) -> Self {
        let cells = doc
            .verdicts
            .iter()
            .map(|verdict| {
                let exp = &verdict.exponential;
                let pow = &verdict.power_law;
                let LawParams::Exponential(ep) = exp.fit.params else {
                    unreachable!("exponential outcome holds exponential params")
                };
                let LawParams::PowerLaw(pp) = pow.fit.params else {
                    unreachable!("power-law outcome holds power-law params")
                };
                JsonCell {
                    family: verdict.key.family.clone(),
                    dataset: verdict.key.dataset.clone(),
                    metric: verdict.key.metric.clone(),
                    decoding: verdict.key.decoding.clone(),
                    models: JsonModels {
                        exponential: JsonModel {
                            params: JsonExpParams {
                                c: ep.c,
                                beta: ep.beta,
                                d: ep.d,
                            },
                            stage1: JsonStage1 {
                                fold_losses: exp.stage1.fold_losses.clone(),
                                mean_loss: exp.stage1.mean_loss,
                            },
                            gof: JsonGof {
                                f_stat: exp.gof.f_stat,
                                df: [exp.gof.df_reduced, exp.gof.df_exact],
                                p: exp.gof.p_value,
                                pass: exp.gof.pass,
                                applicable: exp.gof.applicable,
                            },
                            normality: JsonNormality {
                                w: exp.normality.w_stat,
                                p: exp.normality.p_value,
                                pass: exp.normality.pass,
                            },
                        },
                        power_law: JsonModel {
                            params: JsonPowParams {
                                a: pp.a,
                                alpha: pp.alpha,
                                b: pp.b,
                            },
                            stage1: JsonStage1 {
                                fold_losses: pow.stage1.fold_losses.clone(),
                                mean_loss: pow.stage1.mean_loss,
                            },
                            gof: JsonGof {
                                f_stat: pow.gof.f_stat,
                                df: [pow.gof.df_reduced, pow.gof.df_exact],
                                p: pow.gof.p_value,
                                pass: pow.gof.pass,
                                applicable: pow.gof.applicable,
                            },
                            normality: JsonNormality {
                                w: pow.normality.w_stat,
                                p: pow.normality.p_value,
                                pass: pow.normality.pass,
                            },
                        },
                    },
                    vuong: match verdict.vuong {
                        Some(v) => JsonVuong {
                            v: Some(v.v_stat),
                            p: Some(v.p_value),
                            preferred: preference_str(v.preferred).to_string(),
                            ran: true,
                        },
                        None => JsonVuong {
                            v: None,
                            p: None,
                            preferred: "none".to_string(),
                            ran: false,
                        },
                    },
                    effective_law: effective_law_str(verdict.effective_law).to_string(),
                }
            })
            .collect();
        JsonReport {
            config: doc.config.clone(),
            generated_at: doc.generated_at.clone(),
            cells,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::{fit, FitConfig};
    use crate::laws::ExpParams;
    use crate::stats::NormalityReport;
    use crate::synth::{generate, pythia_sizes, SynthSpec};
    use crate::validate::{CvReport, GofReport, ModelOutcome};

    fn exp_series(noise: f64, seed: u64) -> ScoreSeries {
        generate(&SynthSpec {
            params: LawParams::Exponential(ExpParams {
                c: 0.8,
                beta: -1.2,
                d: 0.05,
            }),
            sizes: pythia_sizes(),
            noise_sigma: noise,
            seed,
        })
        .unwrap()
    }

    #[test]
    fn format_sci_matches_table_cells() {
        assert_eq!(format_sci(1.89e-3), "1.89e-03");
        assert_eq!(format_sci(2.82e3), "2.82e+03");
        assert_eq!(format_sci(5.48e19), "5.48e+19");
        assert_eq!(format_sci(6.56e-4), "6.56e-04");
        assert_eq!(format_sci(0.0), "0.00e+00");
        assert_eq!(format_sci(-1.5e-2), "-1.50e-02");
        assert_eq!(format_sci(9.999e5), "1.00e+06");
        assert_eq!(format_sci(1.0), "1.00e+00");
    }

    #[test]
    fn zero_residual_band_collapses() {
        let series = exp_series(0.0, 0);
        let mut fitted = fit(&series, ModelKind::Exponential, &FitConfig::default()).unwrap();
        fitted.residuals = vec![0.0; series.len()];
        let ps = moe_band(&series, &fitted, 0.95, 50, (0.07, 12.0)).unwrap();
        assert_eq!(ps.moe, Some(0.0));
        assert_eq!(ps.band_lo, ps.curve);
        assert_eq!(ps.band_hi, ps.curve);
    }

    #[test]
    fn doubling_residuals_doubles_moe() {
        let series = exp_series(0.01, 1);
        let fitted = fit(&series, ModelKind::Exponential, &FitConfig::default()).unwrap();
        let base = moe_band(&series, &fitted, 0.95, 10, (0.07, 12.0)).unwrap();
        let mut doubled = fitted.clone();
        for r in doubled.residuals.iter_mut() {
            *r *= 2.0;
        }
        let wide = moe_band(&series, &doubled, 0.95, 10, (0.07, 12.0)).unwrap();
        let (a, b) = (base.moe.unwrap(), wide.moe.unwrap());
        assert!((b - 2.0 * a).abs() <= 1e-12 * b.abs());
    }

    #[test]
    fn moe_multiplier_is_the_t_quantile() {
        // n = 8 residuals, level 0.95: multiplier must be t(0.975, 5).
        let series = exp_series(0.01, 2);
        let fitted = fit(&series, ModelKind::Exponential, &FitConfig::default()).unwrap();
        assert_eq!(fitted.residuals.len(), 8);
        let ps = moe_band(&series, &fitted, 0.95, 10, (0.07, 12.0)).unwrap();
        let ssr: f64 = fitted.residuals.iter().map(|r| r * r).sum();
        let sd = (ssr / 5.0).sqrt();
        let expected = t_quantile(0.975, 5).unwrap() * sd;
        assert!((ps.moe.unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn band_is_symmetric_and_grid_increasing() {
        let series = exp_series(0.02, 3);
        let fitted = fit(&series, ModelKind::Exponential, &FitConfig::default()).unwrap();
        let ps = moe_band(&series, &fitted, 0.9, 64, (0.07, 12.0)).unwrap();
        for i in 0..ps.grid.len() {
            let up = ps.band_hi[i] - ps.curve[i];
            let down = ps.curve[i] - ps.band_lo[i];
            assert!((up - down).abs() <= 1e-12);
            assert!(ps.band_lo[i] <= ps.curve[i] && ps.curve[i] <= ps.band_hi[i]);
        }
        assert!(ps.grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn band_undefined_for_three_points() {
        let series = ScoreSeries::new(
            CellKey::synthetic("small"),
            vec![
                Observation { size_b: 1.0, inconsistency: 0.4 },
                Observation { size_b: 2.0, inconsistency: 0.3 },
                Observation { size_b: 4.0, inconsistency: 0.25 },
            ],
        )
        .unwrap();
        let fitted = fit(&series, ModelKind::Exponential, &FitConfig::default()).unwrap();
        let ps = moe_band(&series, &fitted, 0.95, 10, (0.5, 8.0)).unwrap();
        assert_eq!(ps.moe, None);
        assert_eq!(ps.band_lo, ps.curve);
    }

    /// A hand-built verdict with chosen Stage I losses, for render tests.
    pub(crate) fn fixture_verdict(loss_exp: f64, loss_pow: f64) -> ValidationVerdict {
        let series = exp_series(0.0, 9);
        let cfg = FitConfig::default();
        let fit_exp = fit(&series, ModelKind::Exponential, &cfg).unwrap();
        let fit_pow = fit(&series, ModelKind::PowerLaw, &cfg).unwrap();
        let outcome = |kind: ModelKind, fitted: FitResult, loss: f64| ModelOutcome {
            fit: fitted,
            stage1: CvReport {
                kind,
                fold_losses: vec![loss; 5],
                mean_loss: loss,
                k: 5,
                seed: 42,
            },
            gof: GofReport {
                kind,
                applicable: true,
                f_stat: 100.0,
                df_reduced: 7,
                df_exact: 6,
                ssr_reduced: 1.0,
                ssr_exact: 0.01,
                p_value: 0.0001,
                pass: true,
                dropped_points: 0,
            },
            normality: NormalityReport {
                w_stat: 0.97,
                p_value: 0.8,
                n: 8,
                pass: true,
            },
        };
        ValidationVerdict {
            key: CellKey::new("Pythia", "DART", "AlignScore", "nucleus"),
            exponential: outcome(ModelKind::Exponential, fit_exp, loss_exp),
            power_law: outcome(ModelKind::PowerLaw, fit_pow, loss_pow),
            vuong: Some(crate::validate::VuongReport {
                v_stat: 4.2,
                p_value: 2.5e-5,
                n: 8,
                preferred: Preference::Exponential,
                significant: true,
            }),
            stage3_run: true,
            effective_law: Some(ModelKind::Exponential),
        }
    }

    fn doc_with(verdicts: Vec<ValidationVerdict>, format: ReportFormat) -> ReportDocument {
        ReportDocument::new(
            verdicts,
            format,
            ConfigEcho::new(&FrameworkConfig::default(), 1.0, 0.95, 200),
        )
    }

    #[test]
    fn markdown_renders_loss_cells_and_flags() {
        let doc = doc_with(vec![fixture_verdict(1.89e-3, 2.82e3)], ReportFormat::Markdown);
        let text = render(&doc);
        assert!(text.contains(" 1.89e-03 |"), "plain cell:\n{text}");
        assert!(text.contains("**2.82e+03**"), "flagged cell:\n{text}");
        // Effective-law marker appears on the exponential row only.
        let exp_row = text
            .lines()
            .find(|l| l.contains("| exponential |"))
            .unwrap();
        let pow_row = text.lines().find(|l| l.contains("| power_law |")).unwrap();
        assert!(exp_row.contains("(*)"));
        assert!(!pow_row.contains("(*)"));
    }

    #[test]
    fn csv_round_trips_every_field() {
        let doc = doc_with(vec![fixture_verdict(1.89e-3, 1.47e-2)], ReportFormat::Csv);
        let text = render(&doc);
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let headers = reader.headers().unwrap().clone();
        assert_eq!(headers.len(), CSV_HEADER.split(',').count());
        let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 2);

        let verdict = &doc.verdicts[0];
        for (row, kind) in rows.iter().zip([ModelKind::Exponential, ModelKind::PowerLaw]) {
            let get = |name: &str| {
                let idx = headers.iter().position(|h| h == name).unwrap();
                row.get(idx).unwrap()
            };
            let outcome = verdict.outcome(kind);
            assert_eq!(get("family"), "Pythia");
            assert_eq!(get("law"), kind.label());
            let (amp, shape, offset) = outcome.fit.params.components();
            assert_eq!(get("amplitude").parse::<f64>().unwrap(), amp);
            assert_eq!(get("shape").parse::<f64>().unwrap(), shape);
            assert_eq!(get("offset").parse::<f64>().unwrap(), offset);
            assert_eq!(
                get("mean_loss").parse::<f64>().unwrap(),
                outcome.stage1.mean_loss
            );
            let folds: Vec<f64> = get("fold_losses")
                .split(';')
                .map(|v| v.parse().unwrap())
                .collect();
            assert_eq!(folds, outcome.stage1.fold_losses);
            assert_eq!(get("gof_pass").parse::<bool>().unwrap(), outcome.gof.pass);
            assert_eq!(
                get("normality_w").parse::<f64>().unwrap(),
                outcome.normality.w_stat
            );
            assert_eq!(get("vuong_ran"), "true");
            assert_eq!(
                get("vuong_v").parse::<f64>().unwrap(),
                verdict.vuong.unwrap().v_stat
            );
            assert_eq!(get("effective_law"), "exponential");
        }
    }

    #[test]
    fn json_round_trips_losslessly() {
        let doc = doc_with(vec![fixture_verdict(1.89e-3, 1.47e-2)], ReportFormat::Json);
        let text = render(&doc);
        let parsed: JsonReport = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, JsonReport::from_document(&doc));
        // Spot-check schema keys.
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(value["cells"][0]["models"]["exponential"]["params"]["C"].is_number());
        assert!(value["cells"][0]["models"]["power_law"]["params"]["alpha"].is_number());
        assert!(value["cells"][0]["vuong"]["ran"].is_boolean());
        assert!(value["config"]["seed"].is_number());
    }

    #[test]
    fn plot_csv_has_expected_columns() {
        let series = exp_series(0.01, 4);
        let fitted = fit(&series, ModelKind::Exponential, &FitConfig::default()).unwrap();
        let ps = moe_band(&series, &fitted, 0.95, 5, (0.07, 12.0)).unwrap();
        let curves = plot_curve_csv(&series.key, std::slice::from_ref(&ps));
        let mut lines = curves.lines();
        assert_eq!(lines.next().unwrap(), "cell_id,kind,x,y_fit,y_lo,y_hi");
        assert_eq!(curves.lines().count(), 1 + 5);
        let obs = plot_observations_csv(&series.key, &ps.points);
        assert_eq!(obs.lines().next().unwrap(), "cell_id,x,y_obs");
        assert_eq!(obs.lines().count(), 1 + series.len());
    }
}
