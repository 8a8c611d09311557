//! Shapiro-Wilk normality screen, on raw samples and on fit residuals.
//!
//! ```bash
//! cargo run --example normality_screen
//! ```

use scaling_lab::fit::{fit, FitConfig};
use scaling_lab::laws::{ExpParams, LawParams, ModelKind};
use scaling_lab::stats::shapiro_wilk;
use scaling_lab::synth::{generate, log_spaced_sizes, SynthSpec};

fn main() -> scaling_lab::Result<()> {
    // A clearly normal-looking sample and a clearly skewed one.
    let symmetric = [0.1, -0.4, 0.3, 0.9, -0.7, 0.2, -0.1, 0.5, -0.3, 0.0, 0.6, -0.5];
    let skewed: Vec<f64> = (1..=12).map(|i| (i as f64 / 2.0).exp()).collect();
    for (name, sample) in [("symmetric", symmetric.as_slice()), ("skewed", &skewed)] {
        let r = shapiro_wilk(sample, 0.05)?;
        println!(
            "{name:>9}: W = {:.4}, p = {:.4} -> normality {}",
            r.w_stat,
            r.p_value,
            if r.pass { "not rejected" } else { "rejected" }
        );
    }

    // The screen the framework records: residuals of each law's fit.
    let series = generate(&SynthSpec {
        params: LawParams::Exponential(ExpParams {
            c: 0.8,
            beta: -1.2,
            d: 0.05,
        }),
        sizes: log_spaced_sizes(0.07, 12.0, 30),
        noise_sigma: 0.01,
        seed: 11,
    })?;
    println!();
    for kind in [ModelKind::Exponential, ModelKind::PowerLaw] {
        let fitted = fit(&series, kind, &FitConfig::default())?;
        let r = shapiro_wilk(&fitted.residuals, 0.05)?;
        println!(
            "{kind:<12} residuals: W = {:.4}, p = {:.4} -> {}",
            r.w_stat,
            r.p_value,
            if r.pass { "pass" } else { "fail" }
        );
    }
    Ok(())
}
