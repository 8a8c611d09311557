//! Emit fitted-curve plot data with a 95% margin-of-error band.
//!
//! ```bash
//! cargo run --example plot_bands
//! ```

use scaling_lab::fit::{fit, FitConfig};
use scaling_lab::laws::{ExpParams, LawParams, ModelKind};
use scaling_lab::report::{moe_band, plot_curve_csv, plot_observations_csv};
use scaling_lab::synth::{generate, pythia_sizes, SynthSpec};

fn main() -> scaling_lab::Result<()> {
    let series = generate(&SynthSpec {
        params: LawParams::Exponential(ExpParams {
            c: 0.8,
            beta: -1.2,
            d: 0.05,
        }),
        sizes: pythia_sizes(),
        noise_sigma: 0.01,
        seed: 5,
    })?;

    let mut bands = Vec::new();
    for kind in [ModelKind::Exponential, ModelKind::PowerLaw] {
        let fitted = fit(&series, kind, &FitConfig::default())?;
        let band = moe_band(&series, &fitted, 0.95, 12, (0.07, 12.0))?;
        println!(
            "{kind}: margin of error = {}",
            band.moe
                .map(|m| format!("{m:.5}"))
                .unwrap_or_else(|| "unavailable (n <= 3)".to_string())
        );
        bands.push(band);
    }

    println!("\n{}", plot_curve_csv(&series.key, &bands));
    println!("{}", plot_observations_csv(&series.key, &series.points));
    Ok(())
}
