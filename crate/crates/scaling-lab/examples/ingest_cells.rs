//! Parse a score CSV: size labels, consistency conversion, per-size
//! averaging, cell grouping, and the skip report.
//!
//! ```bash
//! cargo run --example ingest_cells
//! ```

use scaling_lab::ingest::{parse_size, read_series, IngestOptions};

const SAMPLE: &str = "\
family,dataset,metric,decoding,size,score,score_kind
Pythia,DART,AlignScore,nucleus,70M,0.61,consistency
Pythia,DART,AlignScore,nucleus,160M,0.70,consistency
Pythia,DART,AlignScore,nucleus,410M,0.78,consistency
Pythia,DART,AlignScore,nucleus,1B,0.84,consistency
Pythia,DART,AlignScore,nucleus,1B,0.86,consistency
Pythia,DART,AlignScore,nucleus,2.8B,0.89,consistency
Pythia,DART,AlignScore,nucleus,12B,0.91,consistency
OPT,DART,AlignScore,nucleus,130M,0.42,inconsistency
OPT,DART,AlignScore,nucleus,1.3B,0.2,inconsistency
";

fn main() -> scaling_lab::Result<()> {
    for label in ["70M", "1.4B", "0.56M", "12B"] {
        println!("parse_size({label:>6}) = {} billions", parse_size(label)?);
    }
    println!();

    let report = read_series(SAMPLE.as_bytes(), &IngestOptions::default())?;
    for series in &report.series {
        println!("cell {} with {} points:", series.key, series.len());
        for p in &series.points {
            println!("  size {:>6.3}B  inconsistency {:.4}", p.size_b, p.inconsistency);
        }
    }
    for skip in &report.skipped {
        println!(
            "skipped cell {} ({} distinct sizes from {} rows; need 3)",
            skip.key, skip.distinct_sizes, skip.rows
        );
    }
    // The duplicate 1B rows above were averaged into one observation:
    // consistency 0.84 and 0.86 become inconsistency (0.16 + 0.14) / 2.
    Ok(())
}
