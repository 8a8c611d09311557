//! Command-line interface: `scaling-lab <fit|validate|simulate|plot-data>`.
//!
//! Exit codes: 0 on success, 1 on data errors, 2 on usage errors.

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::fit::{fit, FitConfig};
use crate::ingest::{canonical_label, read_series, CellKey, IngestOptions, IngestReport, ScoreSeries};
use crate::laws::{ExpParams, LawParams, ModelKind, PowerLawParams};
use crate::report::{
    moe_band, plot_curve_csv, plot_observations_csv, render, ConfigEcho, ReportDocument,
    ReportFormat,
};
use crate::synth::{generate_points, pythia_sizes, SynthSpec};
use crate::validate::{run_framework_all, FrameworkConfig};

#[derive(Parser)]
#[command(
    name = "scaling-lab",
    version,
    about = "Fit scaling laws to inconsistency-vs-size data and run the three-stage validation framework"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit both scaling laws to every cell and print parameters and loss.
    Fit(FitArgs),
    /// Run the full three-stage validation framework and emit a report.
    Validate(ValidateArgs),
    /// Generate a synthetic score file from a known ground-truth law.
    Simulate(SimulateArgs),
    /// Emit fitted-curve plot data with margin-of-error bands.
    PlotData(PlotDataArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Md,
    Csv,
    Json,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Md => ReportFormat::Markdown,
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    #[value(alias = "exponential")]
    Exp,
    #[value(alias = "power_law", alias = "power-law")]
    Pow,
}

#[derive(Args)]
struct CommonIo {
    /// Input score CSV; `-` reads stdin.
    #[arg(long, default_value = "-")]
    input: String,
    /// Output path; `-` writes stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    io: CommonIo,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    huber_delta: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Md)]
    format: FormatArg,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    io: CommonIo,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    huber_delta: f64,
    #[arg(long, default_value_t = 0.05)]
    gof_alpha: f64,
    #[arg(long, default_value_t = 0.005)]
    vuong_alpha: f64,
    #[arg(long, default_value_t = 0.05)]
    normality_alpha: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Md)]
    format: FormatArg,
    #[arg(long, default_value_t = 1.0)]
    high_loss_threshold: f64,
    #[arg(long, default_value_t = 0.95)]
    ci: f64,
    #[arg(long, default_value_t = 200)]
    grid: usize,
}

#[derive(Args)]
struct SimulateArgs {
    /// Output path; `-` writes stdout.
    #[arg(long, default_value = "-")]
    out: String,
    /// Which law generates the data.
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Exponential amplitude.
    #[arg(long = "C", default_value_t = 0.8, allow_hyphen_values = true)]
    c: f64,
    /// Exponential rate per billion parameters.
    #[arg(long, default_value_t = -1.2, allow_hyphen_values = true)]
    beta: f64,
    /// Exponential offset.
    #[arg(long = "D", default_value_t = 0.05, allow_hyphen_values = true)]
    d: f64,
    /// Power-law amplitude.
    #[arg(long = "A", default_value_t = 0.3, allow_hyphen_values = true)]
    a: f64,
    /// Power-law exponent.
    #[arg(long, default_value_t = -0.7, allow_hyphen_values = true)]
    alpha: f64,
    /// Power-law offset.
    #[arg(long = "B", default_value_t = 0.02, allow_hyphen_values = true)]
    b: f64,
    /// `pythia` or a comma-separated size list (labels like `70M` or
    /// plain billions).
    #[arg(long, default_value = "pythia")]
    sizes: String,
    /// Gaussian noise standard deviation.
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = "synthetic")]
    family: String,
    #[arg(long, default_value = "synthetic")]
    dataset: String,
    #[arg(long, default_value = "synthetic")]
    metric: String,
    #[arg(long, default_value = "none")]
    decoding: String,
}

#[derive(Args)]
struct PlotDataArgs {
    #[command(flatten)]
    io: CommonIo,
    /// Observations CSV path; defaults to the out path with `_obs`
    /// inserted, or follows the curves on stdout.
    #[arg(long)]
    obs_out: Option<String>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    huber_delta: f64,
    #[arg(long, default_value_t = 0.95)]
    ci: f64,
    #[arg(long, default_value_t = 200)]
    grid: usize,
}

/// Parse argv and run; clap handles usage errors with exit code 2.
pub fn run() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Fit(args) => run_fit(args),
        Command::Validate(args) => run_validate(args),
        Command::Simulate(args) => run_simulate(args),
        Command::PlotData(args) => run_plot_data(args),
    }
}

fn read_input(path: &str) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    if path == "-" {
        std::io::stdin().read_to_end(&mut buf)?;
    } else {
        buf = std::fs::read(path)?;
    }
    Ok(buf)
}

fn write_output(path: &str, content: &str) -> Result<()> {
    if path == "-" {
        print!("{content}");
        Ok(())
    } else {
        std::fs::write(path, content)?;
        Ok(())
    }
}

fn ingest_from(path: &str) -> Result<IngestReport> {
    let bytes = read_input(path)?;
    let report = read_series(bytes.as_slice(), &IngestOptions::default())?;
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    for skip in &report.skipped {
        eprintln!(
            "skipped cell {} ({} distinct sizes from {} rows; need 3)",
            skip.key, skip.distinct_sizes, skip.rows
        );
    }
    if report.series.is_empty() {
        return Err(Error::Ingest(
            "no usable cells (every cell skipped or empty input)".into(),
        ));
    }
    Ok(report)
}

fn run_fit(args: FitArgs) -> Result<()> {
    let ingest = ingest_from(&args.io.input)?;
    let cfg = FitConfig {
        huber_delta: args.huber_delta,
        seed: args.seed,
        ..FitConfig::default()
    };

    let mut rows: Vec<(CellKey, ModelKind, LawParams, f64, bool)> = Vec::new();
    for series in &ingest.series {
        for kind in [ModelKind::Exponential, ModelKind::PowerLaw] {
            let fitted = fit(series, kind, &cfg)?;
            rows.push((
                series.key.clone(),
                kind,
                fitted.params,
                fitted.huber_loss,
                fitted.converged,
            ));
        }
    }

    let text = match args.format {
        FormatArg::Md => {
            let mut out = String::from(
                "| family | dataset | metric | decoding | law | amplitude | shape | offset | huber_loss | converged |\n|---|---|---|---|---|---|---|---|---|---|\n",
            );
            for (key, kind, params, loss, converged) in &rows {
                let (amp, shape, offset) = params.components();
                out.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {amp:.6e} | {shape:.6e} | {offset:.6e} | {loss:.6e} | {converged} |\n",
                    key.family, key.dataset, key.metric, key.decoding, kind
                ));
            }
            out
        }
        FormatArg::Csv => {
            let mut out = String::from(
                "family,dataset,metric,decoding,law,amplitude,shape,offset,huber_loss,converged\n",
            );
            for (key, kind, params, loss, converged) in &rows {
                let (amp, shape, offset) = params.components();
                out.push_str(&format!(
                    "{},{},{},{},{},{amp},{shape},{offset},{loss},{converged}\n",
                    key.family, key.dataset, key.metric, key.decoding, kind
                ));
            }
            out
        }
        FormatArg::Json => {
            let cells: Vec<serde_json::Value> = rows
                .iter()
                .map(|(key, kind, params, loss, converged)| {
                    let (amp, shape, offset) = params.components();
                    serde_json::json!({
                        "family": key.family,
                        "dataset": key.dataset,
                        "metric": key.metric,
                        "decoding": key.decoding,
                        "law": kind.label(),
                        "amplitude": amp,
                        "shape": shape,
                        "offset": offset,
                        "huber_loss": loss,
                        "converged": converged,
                    })
                })
                .collect();
            let mut text = serde_json::to_string_pretty(&serde_json::json!({ "fits": cells }))
                .expect("serializable");
            text.push('\n');
            text
        }
    };
    write_output(&args.io.out, &text)
}

fn run_validate(args: ValidateArgs) -> Result<()> {
    let ingest = ingest_from(&args.io.input)?;
    let cfg = FrameworkConfig {
        fit: FitConfig {
            huber_delta: args.huber_delta,
            seed: args.seed,
            ..FitConfig::default()
        },
        folds: args.folds,
        seed: args.seed,
        gof_alpha: args.gof_alpha,
        vuong_alpha: args.vuong_alpha,
        normality_alpha: args.normality_alpha,
        ..FrameworkConfig::default()
    };

    let results = run_framework_all(&ingest.series, &cfg);
    let mut verdicts = Vec::new();
    let mut failures = Vec::new();
    for (key, result) in results {
        match result {
            Ok(v) => verdicts.push(v),
            Err(e) => failures.push((key, e)),
        }
    }
    for (key, e) in &failures {
        eprintln!("cell {key} failed: {e}");
    }
    if verdicts.is_empty() {
        if let Some((_, e)) = failures.into_iter().next() {
            return Err(e);
        }
        return Err(Error::Ingest("no cells to validate".into()));
    }

    let echo = ConfigEcho::new(&cfg, args.high_loss_threshold, args.ci, args.grid);
    let doc = ReportDocument::new(verdicts, args.format.into(), echo);
    write_output(&args.io.out, &render(&doc))
}

fn parse_sizes(spec: &str) -> Result<Vec<f64>> {
    if spec.eq_ignore_ascii_case("pythia") {
        return Ok(pythia_sizes());
    }
    spec.split(',')
        .map(|token| {
            let token = token.trim();
            crate::ingest::parse_size(token).or_else(|_| {
                token
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidSynthSpec(format!("bad size token {token:?}")))
            })
        })
        .collect()
}

fn run_simulate(args: SimulateArgs) -> Result<()> {
    let params = match args.kind {
        KindArg::Exp => LawParams::Exponential(ExpParams {
            c: args.c,
            beta: args.beta,
            d: args.d,
        }),
        KindArg::Pow => LawParams::PowerLaw(PowerLawParams {
            a: args.a,
            alpha: args.alpha,
            b: args.b,
        }),
    };
    let spec = SynthSpec {
        params,
        sizes: parse_sizes(&args.sizes)?,
        noise_sigma: args.sigma,
        seed: args.seed,
    };
    let points = generate_points(&spec)?;

    let mut out = String::from("family,dataset,metric,decoding,size,score,score_kind\n");
    for p in &points {
        out.push_str(&format!(
            "{},{},{},{},{},{},inconsistency\n",
            args.family,
            args.dataset,
            args.metric,
            args.decoding,
            canonical_label(p.size_b),
            p.inconsistency
        ));
    }
    write_output(&args.out, &out)
}

fn obs_path_for(out: &str) -> String {
    let path = Path::new(out);
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("plot");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    let mut with_obs = PathBuf::from(path);
    with_obs.set_file_name(format!("{stem}_obs.{ext}"));
    with_obs.to_string_lossy().into_owned()
}

fn run_plot_data(args: PlotDataArgs) -> Result<()> {
    let ingest = ingest_from(&args.io.input)?;
    let cfg = FitConfig {
        huber_delta: args.huber_delta,
        seed: args.seed,
        ..FitConfig::default()
    };

    let mut curves = String::from("cell_id,kind,x,y_fit,y_lo,y_hi\n");
    let mut observations = String::from("cell_id,x,y_obs\n");
    for series in &ingest.series {
        let lo = series.points.first().expect("non-empty").size_b;
        let hi = series.points.last().expect("non-empty").size_b;
        let mut bands = Vec::new();
        for kind in [ModelKind::Exponential, ModelKind::PowerLaw] {
            let fitted = fit(series, kind, &cfg)?;
            bands.push(moe_band(series, &fitted, args.ci, args.grid, (lo, hi))?);
        }
        let curve_block = plot_curve_csv(&series.key, &bands);
        curves.push_str(curve_block.split_once('\n').map(|x| x.1).unwrap_or(""));
        let obs_block = plot_observations_csv(&series.key, &series.points);
        observations.push_str(obs_block.split_once('\n').map(|x| x.1).unwrap_or(""));
    }

    if args.io.out == "-" {
        match &args.obs_out {
            Some(path) => {
                write_output("-", &curves)?;
                write_output(path, &observations)?;
            }
            None => {
                // Both tables on stdout, separated by a blank line.
                write_output("-", &curves)?;
                println!();
                write_output("-", &observations)?;
            }
        }
    } else {
        write_output(&args.io.out, &curves)?;
        let obs_path = args
            .obs_out
            .clone()
            .unwrap_or_else(|| obs_path_for(&args.io.out));
        write_output(&obs_path, &observations)?;
    }
    Ok(())
}

/// Expose series loading for examples and tests that drive the CLI paths.
pub fn load_cells(path: &str) -> Result<Vec<ScoreSeries>> {
    Ok(ingest_from(path)?.series)
}
