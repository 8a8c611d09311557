//! Compare the two fitted laws head to head with Vuong's test.
//!
//! ```bash
//! cargo run --example vuong_head_to_head
//! ```

use scaling_lab::fit::{fit, FitConfig};
use scaling_lab::laws::{ExpParams, LawParams, ModelKind};
use scaling_lab::report::preference_str;
use scaling_lab::synth::{generate, log_spaced_sizes, SynthSpec};
use scaling_lab::validate::vuong;

fn main() -> scaling_lab::Result<()> {
    let series = generate(&SynthSpec {
        params: LawParams::Exponential(ExpParams {
            c: 0.8,
            beta: -1.2,
            d: 0.05,
        }),
        sizes: log_spaced_sizes(0.07, 12.0, 40),
        noise_sigma: 0.005,
        seed: 21,
    })?;

    let cfg = FitConfig::default();
    let exp_fit = fit(&series, ModelKind::Exponential, &cfg)?;
    let pow_fit = fit(&series, ModelKind::PowerLaw, &cfg)?;
    println!(
        "total Huber loss: exponential {:.3e}, power law {:.3e}",
        exp_fit.huber_loss, pow_fit.huber_loss
    );

    // Positive V favors the exponential law; the stringent level keeps
    // only compelling evidence.
    let report = vuong(&exp_fit.loglik, &pow_fit.loglik, 0.005)?;
    println!(
        "Vuong: V = {:.3} over n = {}, two-sided p = {:.3e}",
        report.v_stat, report.n, report.p_value
    );
    println!(
        "preferred at p < 0.005: {}",
        preference_str(report.preferred)
    );
    Ok(())
}
