//! Run the full three-stage validation framework on synthetic cells and
//! print a compact verdict for each.
//!
//! ```bash
//! cargo run --example validate_framework
//! ```

use scaling_lab::ingest::CellKey;
use scaling_lab::laws::{ExpParams, LawParams, ModelKind, PowerLawParams};
use scaling_lab::report::effective_law_str;
use scaling_lab::synth::{generate_with_key, log_spaced_sizes, SynthSpec};
use scaling_lab::validate::{run_framework_all, FrameworkConfig};

fn main() -> scaling_lab::Result<()> {
    let cells = vec![
        generate_with_key(
            &SynthSpec {
                params: LawParams::Exponential(ExpParams {
                    c: 0.8,
                    beta: -1.2,
                    d: 0.05,
                }),
                sizes: log_spaced_sizes(0.07, 12.0, 40),
                noise_sigma: 0.005,
                seed: 1,
            },
            CellKey::new("FamA", "open-domain", "demo-metric", "nucleus"),
        )?,
        generate_with_key(
            &SynthSpec {
                params: LawParams::PowerLaw(PowerLawParams {
                    a: 0.3,
                    alpha: -0.7,
                    b: 0.02,
                }),
                sizes: log_spaced_sizes(0.07, 12.0, 40),
                noise_sigma: 0.005,
                seed: 2,
            },
            CellKey::new("FamB", "open-domain", "demo-metric", "nucleus"),
        )?,
    ];

    let cfg = FrameworkConfig::default();
    for (key, result) in run_framework_all(&cells, &cfg) {
        match result {
            Ok(verdict) => {
                println!("cell {key}:");
                for kind in [ModelKind::Exponential, ModelKind::PowerLaw] {
                    let outcome = verdict.outcome(kind);
                    println!(
                        "  {kind:<12} stage1 mean held-out loss {:.3e}, gof p = {:.3e} ({}), normality W = {:.4} (p = {:.3})",
                        outcome.stage1.mean_loss,
                        outcome.gof.p_value,
                        if outcome.gof.pass { "pass" } else { "fail" },
                        outcome.normality.w_stat,
                        outcome.normality.p_value,
                    );
                }
                match verdict.vuong {
                    Some(v) => println!(
                        "  stage3: V = {:.3}, p = {:.3e} -> effective law: {}",
                        v.v_stat,
                        v.p_value,
                        effective_law_str(verdict.effective_law)
                    ),
                    None => println!(
                        "  stage3 not run (both laws must pass goodness-of-fit first)"
                    ),
                }
            }
            Err(e) => println!("cell {key} failed: {e}"),
        }
        println!();
    }
    Ok(())
}
