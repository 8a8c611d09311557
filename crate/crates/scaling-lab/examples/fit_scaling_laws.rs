//! Fit both scaling laws to a synthetic cell and print the estimates.
//!
//! ```bash
//! cargo run --example fit_scaling_laws
//! ```

use scaling_lab::fit::{fit, FitConfig};
use scaling_lab::laws::{ExpParams, LawParams, ModelKind};
use scaling_lab::synth::{generate, pythia_sizes, SynthSpec};

fn main() -> scaling_lab::Result<()> {
    // Ground truth: inconsistency decays exponentially with size.
    let truth = ExpParams {
        c: 0.8,
        beta: -1.2,
        d: 0.05,
    };
    let spec = SynthSpec {
        params: LawParams::Exponential(truth),
        sizes: pythia_sizes(),
        noise_sigma: 0.003,
        seed: 7,
    };
    let series = generate(&spec)?;

    println!("cell {} with {} points", series.key, series.len());
    println!("truth: C = {}, beta = {}, D = {}\n", truth.c, truth.beta, truth.d);

    let cfg = FitConfig::default();
    for kind in [ModelKind::Exponential, ModelKind::PowerLaw] {
        let result = fit(&series, kind, &cfg)?;
        let (amp, shape, offset) = result.params.components();
        println!("{kind}:");
        println!("  amplitude = {amp:.6}");
        println!("  shape     = {shape:.6}");
        println!("  offset    = {offset:.6}");
        println!("  total Huber loss = {:.3e}", result.huber_loss);
        println!("  residual variance (MLE) = {:.3e}", result.sigma2);
        println!("  converged = {}\n", result.converged);
    }
    Ok(())
}
