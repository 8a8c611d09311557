//! Write a synthetic score file in the ingest CSV format, then read it
//! back to show the round trip.
//!
//! ```bash
//! cargo run --example simulate_csv
//! ```

use scaling_lab::ingest::{canonical_label, read_series, IngestOptions};
use scaling_lab::laws::{ExpParams, LawParams};
use scaling_lab::synth::{generate_points, pythia_sizes, SynthSpec};

fn main() -> scaling_lab::Result<()> {
    let spec = SynthSpec {
        params: LawParams::Exponential(ExpParams {
            c: 0.8,
            beta: -1.2,
            d: 0.05,
        }),
        sizes: pythia_sizes(),
        noise_sigma: 0.002,
        seed: 3,
    };

    let mut csv = String::from("family,dataset,metric,decoding,size,score,score_kind\n");
    for p in generate_points(&spec)? {
        csv.push_str(&format!(
            "Pythia,demo,demo-metric,nucleus,{},{},inconsistency\n",
            canonical_label(p.size_b),
            p.inconsistency
        ));
    }
    print!("{csv}");

    let report = read_series(csv.as_bytes(), &IngestOptions::default())?;
    let series = &report.series[0];
    println!(
        "\nround trip: {} cell(s), first cell {} with {} points, sizes {:?}",
        report.series.len(),
        series.key,
        series.len(),
        series.sizes()
    );
    Ok(())
}
