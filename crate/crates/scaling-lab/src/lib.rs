//! Scaling-law fitting and statistical validation for factual
//! inconsistency versus model size.
//!
//! The library fits two scaling laws to (size, inconsistency) data —
//! a power law `A x^alpha + B` and an exponential `C e^(beta x) + D` —
//! by robust Huber-loss estimation, then judges them with a three-stage
//! framework: cross-validated held-out loss, an F-test for
//! goodness-of-fit on the log-linearized model, and Vuong's
//! likelihood-ratio test to pick the effective law, with a
//! Shapiro-Wilk normality screen on the residuals.
//!
//! Most capabilities have a runnable example:
//!
//! ```bash
//! cargo run --example fit_scaling_laws
//! cargo run --example validate_framework
//! cargo run --example simulate_csv
//! cargo run --example ingest_cells
//! cargo run --example plot_bands
//! cargo run --example normality_screen
//! cargo run --example vuong_head_to_head
//! cargo run --example report_formats
//! ```
//!
//! The same pipeline is scriptable through the `scaling-lab` binary
//! (`fit`, `validate`, `simulate`, `plot-data`).

pub mod cli;
pub mod error;
pub mod fit;
pub mod ingest;
pub mod laws;
pub mod optim;
pub mod report;
pub mod stats;
pub mod synth;
pub mod validate;

pub use error::{Error, Result};
pub use fit::{fit as fit_series, huber, loglik_gaussian, FitConfig, FitResult};
pub use ingest::{
    canonical_label, load_series, parse_size, read_series, to_inconsistency, CellKey, IngestOptions,
    Observation, ScoreKind, ScoreSeries, SizeSpec,
};
pub use laws::{eval_exp, eval_power, linearize, ExpParams, LawParams, ModelKind, PowerLawParams};
pub use report::{moe_band, render, ConfigEcho, PlotSeries, ReportDocument, ReportFormat};
pub use stats::{f_cdf, normal_cdf, ols, shapiro_wilk, t_quantile, NormalityReport, OlsFit};
pub use synth::{generate, pythia_sizes, SynthSpec};
pub use validate::{
    make_folds, run_framework, run_framework_all, stage1_cv, stage2_gof, vuong, CvReport,
    FrameworkConfig, GofReport, Preference, ValidationVerdict, VuongReport,
};
