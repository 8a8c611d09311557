//! Render one validation verdict as Markdown, CSV, and JSON.
//!
//! ```bash
//! cargo run --example report_formats
//! ```

use scaling_lab::ingest::CellKey;
use scaling_lab::laws::{ExpParams, LawParams};
use scaling_lab::report::{render, ConfigEcho, ReportDocument, ReportFormat};
use scaling_lab::synth::{generate_with_key, pythia_sizes, SynthSpec};
use scaling_lab::validate::{run_framework, FrameworkConfig};

fn main() -> scaling_lab::Result<()> {
    let series = generate_with_key(
        &SynthSpec {
            params: LawParams::Exponential(ExpParams {
                c: 0.8,
                beta: -1.2,
                d: 0.05,
            }),
            sizes: pythia_sizes(),
            noise_sigma: 0.004,
            seed: 13,
        },
        CellKey::new("Pythia", "demo", "demo-metric", "nucleus"),
    )?;

    let cfg = FrameworkConfig::default();
    let verdict = run_framework(&series, &cfg)?;
    let echo = ConfigEcho::new(&cfg, 1.0, 0.95, 200);

    for format in [ReportFormat::Markdown, ReportFormat::Csv, ReportFormat::Json] {
        let doc = ReportDocument::new(vec![verdict.clone()], format, echo.clone());
        println!("--- {format:?} ---");
        println!("{}", render(&doc));
    }
    Ok(())
}
