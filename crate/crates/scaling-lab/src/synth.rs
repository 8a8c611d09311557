//! Seeded synthetic series from known ground-truth laws; the test
//! oracle for the fitting and validation machinery.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{CellKey, Observation, ScoreSeries};
use crate::laws::{LawParams, ModelKind};

/// Ground truth for one synthetic cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub params: LawParams,
    /// Sizes in billions, all positive.
    pub sizes: Vec<f64>,
    /// Standard deviation of additive Gaussian noise; 0 gives the exact curve.
    pub noise_sigma: f64,
    pub seed: u64,
}

impl SynthSpec {
    pub fn kind(&self) -> ModelKind {
        self.params.kind()
    }

    fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::InvalidSynthSpec("no sizes given".into()));
        }
        if self.sizes.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::InvalidSynthSpec(
                "sizes must be positive and finite".into(),
            ));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::InvalidSynthSpec(
                "noise_sigma must be nonnegative and finite".into(),
            ));
        }
        Ok(())
    }
}

/// Curve values plus seeded Gaussian noise at the given sizes.
pub fn generate_points(spec: &SynthSpec) -> Result<Vec<Observation>> {
    spec.validate()?;
    let mut sizes = spec.sizes.clone();
    sizes.sort_by(|a, b| a.total_cmp(b));

    let mut points = Vec::with_capacity(sizes.len());
    if spec.noise_sigma == 0.0 {
        for x in sizes {
            points.push(Observation {
                size_b: x,
                inconsistency: spec.params.predict(x),
            });
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let noise = Normal::new(0.0, spec.noise_sigma)
            .map_err(|e| Error::InvalidSynthSpec(e.to_string()))?;
        for x in sizes {
            points.push(Observation {
                size_b: x,
                inconsistency: spec.params.predict(x) + noise.sample(&mut rng),
            });
        }
    }
    if points.iter().any(|p| !p.inconsistency.is_finite()) {
        return Err(Error::InvalidSynthSpec(
            "law evaluates to a non-finite value at a given size".into(),
        ));
    }
    Ok(points)
}

/// Generate a full series under the given cell key.
pub fn generate_with_key(spec: &SynthSpec, key: CellKey) -> Result<ScoreSeries> {
    ScoreSeries::new(key, generate_points(spec)?)
}

/// Generate a series under a default synthetic key named after the law.
pub fn generate(spec: &SynthSpec) -> Result<ScoreSeries> {
    generate_with_key(spec, CellKey::synthetic(spec.kind().label()))
}

/// The eight Pythia model sizes in billions: 70M through 12B.
pub fn pythia_sizes() -> Vec<f64> {
    vec![0.07, 0.16, 0.41, 1.0, 1.4, 2.8, 6.9, 12.0]
}

/// `n` log-spaced sizes covering [lo, hi].
pub fn log_spaced_sizes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (ln_lo + (ln_hi - ln_lo) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
