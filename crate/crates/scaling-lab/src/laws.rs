//! The two parametric scaling-law families and their log-linear forms.
//!
//! Both laws predict inconsistency from model size `x` (billions of
//! parameters) and are defined piecewise: the parametric curve on `x >= 0`
//! and exactly zero for `x < 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::ScoreSeries;

/// Power law `A * x^alpha + B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawParams {
    pub a: f64,
    pub alpha: f64,
    pub b: f64,
}

/// Exponential law `C * exp(beta * x) + D`, `beta` in units of 1/billion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpParams {
    pub c: f64,
    pub beta: f64,
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    PowerLaw,
    Exponential,
}

impl ModelKind {
    pub fn label(self) -> &'static str {
        match self {
            ModelKind::PowerLaw => "power_law",
            ModelKind::Exponential => "exponential",
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Fitted parameters of either family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LawParams {
    PowerLaw(PowerLawParams),
    Exponential(ExpParams),
}

impl LawParams {
    pub fn kind(&self) -> ModelKind {
        match self {
            LawParams::PowerLaw(_) => ModelKind::PowerLaw,
            LawParams::Exponential(_) => ModelKind::Exponential,
        }
    }

    /// (amplitude, shape, offset) — A/alpha/B or C/beta/D.
    pub fn components(&self) -> (f64, f64, f64) {
        match self {
            LawParams::PowerLaw(p) => (p.a, p.alpha, p.b),
            LawParams::Exponential(p) => (p.c, p.beta, p.d),
        }
    }

    pub fn from_components(kind: ModelKind, amp: f64, shape: f64, offset: f64) -> Self {
        match kind {
            ModelKind::PowerLaw => LawParams::PowerLaw(PowerLawParams {
                a: amp,
                alpha: shape,
                b: offset,
            }),
            ModelKind::Exponential => LawParams::Exponential(ExpParams {
                c: amp,
                beta: shape,
                d: offset,
            }),
        }
    }

    /// Additive offset (B or D); the linearization subtracts this.
    pub fn offset(&self) -> f64 {
        self.components().2
    }

    /// Total evaluation used by the fitter and plot grids. The power-law
    /// pole at x = 0 with a negative exponent maps to +inf so an optimizer
    /// rejects the point instead of propagating NaN.
    pub fn predict(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        match self {
            LawParams::PowerLaw(p) => {
                if x == 0.0 && p.alpha < 0.0 {
                    f64::INFINITY
                } else {
                    p.a * x.powf(p.alpha) + p.b
                }
            }
            LawParams::Exponential(p) => p.c * (p.beta * x).exp() + p.d,
        }
    }
}

/// Evaluate the power law at `x`. Returns 0 for negative `x`; `x = 0`
/// with a negative exponent is a pole.
pub fn eval_power(p: &PowerLawParams, x: f64) -> Result<f64> {
    if x < 0.0 {
        return Ok(0.0);
    }
    if x == 0.0 && p.alpha < 0.0 {
        return Err(Error::PowerLawPole);
    }
    Ok(p.a * x.powf(p.alpha) + p.b)
}

/// Evaluate the exponential law at `x`. Returns 0 for negative `x`.
/// Overflow saturates to +inf; callers treat non-finite losses as
/// rejected fits.
pub fn eval_exp(p: &ExpParams, x: f64) -> f64 {
    if x < 0.0 {
        0.0
    } else {
        p.c * (p.beta * x).exp() + p.d
    }
}

/// Log-transformed points, ready for a linear fit.
#[derive(Debug, Clone, PartialEq)]
pub struct Linearized {
    /// (u, v) pairs: power law u = ln x, exponential u = x; v = ln(y - offset).
    pub pairs: Vec<(f64, f64)>,
    /// Points dropped because y - offset <= eps.
    pub dropped: usize,
}

/// Transform a series into the linear form of the given law, with the
/// additive offset fixed at its fitted value. Points at or below the
/// offset have no logarithm and are dropped; fewer than 3 survivors is
/// an error (the goodness-of-fit test then becomes not applicable).
pub fn linearize(
    series: &ScoreSeries,
    kind: ModelKind,
    offset: f64,
    eps: f64,
) -> Result<Linearized> {
    assert!(eps > 0.0, "linearize needs a positive log guard");
    let mut pairs = Vec::with_capacity(series.points.len());
    let mut dropped = 0usize;
    for obs in &series.points {
        let shifted = obs.inconsistency - offset;
        if shifted <= eps {
            dropped += 1;
            continue;
        }
        let u = match kind {
            ModelKind::PowerLaw => obs.size_b.ln(),
            ModelKind::Exponential => obs.size_b,
        };
        pairs.push((u, shifted.ln()));
    }
    if pairs.len() < 3 {
        return Err(Error::LinearizationFailed {
            kept: pairs.len(),
            total: series.points.len(),
            offset,
        });
    }
    Ok(Linearized { pairs, dropped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{CellKey, Observation};

    fn series(points: &[(f64, f64)]) -> ScoreSeries {
        ScoreSeries::new(
            CellKey::synthetic("test"),
            points
                .iter()
                .map(|&(x, y)| Observation {
                    size_b: x,
                    inconsistency: y,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn power_law_examples() {
        let p = PowerLawParams {
            a: 2.0,
            alpha: 0.0,
            b: 1.0,
        };
        assert_eq!(eval_power(&p, 5.0).unwrap(), 3.0);

        let p = PowerLawParams {
            a: 1.0,
            alpha: 1.0,
            b: 0.0,
        };
        assert_eq!(eval_power(&p, 3.0).unwrap(), 3.0);

        let p = PowerLawParams {
            a: 7.0,
            alpha: -1.0,
            b: 0.5,
        };
        assert_eq!(eval_power(&p, -2.0).unwrap(), 0.0);
    }

    #[test]
    fn power_law_pole_at_zero() {
        let p = PowerLawParams {
            a: 1.0,
            alpha: -0.5,
            b: 0.0,
        };
        assert!(matches!(eval_power(&p, 0.0), Err(Error::PowerLawPole)));
        assert!(LawParams::PowerLaw(p).predict(0.0).is_infinite());
    }

    #[test]
    fn exponential_examples() {
        let p = ExpParams {
            c: 1.0,
            beta: 0.0,
            d: 0.5,
        };
        assert_eq!(eval_exp(&p, 10.0), 1.5);

        let p = ExpParams {
            c: 0.5,
            beta: -(2.0f64.ln()),
            d: 0.0,
        };
        assert!((eval_exp(&p, 1.0) - 0.25).abs() < 1e-15);

        let p = ExpParams {
            c: 3.0,
            beta: 1.0,
            d: 1.0,
        };
        assert_eq!(eval_exp(&p, -0.1), 0.0);
    }

    #[test]
    fn negative_x_is_zero_for_both_laws() {
        let pow = LawParams::PowerLaw(PowerLawParams {
            a: 0.4,
            alpha: -0.9,
            b: 0.1,
        });
        let exp = LawParams::Exponential(ExpParams {
            c: 0.4,
            beta: -0.9,
            d: 0.1,
        });
        for i in 1..200 {
            let x = -(i as f64) * 0.37;
            assert_eq!(pow.predict(x), 0.0);
            assert_eq!(exp.predict(x), 0.0);
        }
    }

    #[test]
    fn monotone_on_dense_grid() {
        // C*beta < 0 => decreasing on x >= 0; A*alpha < 0 => decreasing on x > 0.
        let exp = LawParams::Exponential(ExpParams {
            c: 0.8,
            beta: -1.2,
            d: 0.05,
        });
        let pow = LawParams::PowerLaw(PowerLawParams {
            a: 0.3,
            alpha: -0.7,
            b: 0.02,
        });
        let mut prev_e = f64::INFINITY;
        let mut prev_p = f64::INFINITY;
        for i in 1..=2000 {
            let x = i as f64 * 0.01;
            let ye = exp.predict(x);
            let yp = pow.predict(x);
            assert!(ye < prev_e, "exponential not decreasing at x={x}");
            assert!(yp < prev_p, "power law not decreasing at x={x}");
            prev_e = ye;
            prev_p = yp;
        }
    }

    #[test]
    fn rescaling_covariance_identities() {
        // Scaling x by c maps a power law to A' = A * c^-alpha (alpha, B fixed)
        // and an exponential to beta' = beta / c (C, D fixed).
        let c = 3.7f64;
        let pow = PowerLawParams {
            a: 0.3,
            alpha: -0.7,
            b: 0.02,
        };
        let pow_scaled = PowerLawParams {
            a: pow.a * c.powf(-pow.alpha),
            ..pow
        };
        let exp = ExpParams {
            c: 0.8,
            beta: -1.2,
            d: 0.05,
        };
        let exp_scaled = ExpParams {
            beta: exp.beta / c,
            ..exp
        };
        for i in 1..100 {
            let x = i as f64 * 0.13;
            let lhs = eval_power(&pow, x).unwrap();
            let rhs = eval_power(&pow_scaled, c * x).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));

            let lhs = eval_exp(&exp, x);
            let rhs = eval_exp(&exp_scaled, c * x);
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn linearize_power_exact_logs() {
        let e = std::f64::consts::E;
        let s = series(&[
            (1.0, e + 0.1),
            (e, e * e + 0.1),
            (e * e, e * e * e + 0.1),
        ]);
        let lin = linearize(&s, ModelKind::PowerLaw, 0.1, 1e-9).unwrap();
        assert_eq!(lin.dropped, 0);
        let expect = [(0.0, 1.0), (1.0, 2.0), (2.0, 3.0)];
        for (got, want) in lin.pairs.iter().zip(expect.iter()) {
            assert!((got.0 - want.0).abs() < 1e-12);
            assert!((got.1 - want.1).abs() < 1e-12);
        }
    }

    #[test]
    fn linearize_exponential_exact_logs() {
        let e = std::f64::consts::E;
        let s = series(&[(0.5, 1.0f64.exp() * 1.0 + 0.1), (2.0, (e * e) + 0.1), (3.0, (e * e * e) + 0.1)]);
        let lin = linearize(&s, ModelKind::Exponential, 0.1, 1e-9).unwrap();
        assert_eq!(lin.dropped, 0);
        assert!((lin.pairs[0].0 - 0.5).abs() < 1e-12);
        assert!((lin.pairs[0].1 - 1.0).abs() < 1e-12);
        assert!((lin.pairs[1].1 - 2.0).abs() < 1e-12);
        assert!((lin.pairs[2].1 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn linearize_fails_when_everything_drops() {
        let s = series(&[(1.0, 0.1), (2.0, 0.1), (3.0, 0.1)]);
        let err = linearize(&s, ModelKind::Exponential, 0.1, 1e-9).unwrap_err();
        assert!(matches!(
            err,
            Error::LinearizationFailed { kept: 0, total: 3, .. }
        ));
    }

    #[test]
    fn linearize_counts_partial_drops() {
        let s = series(&[(1.0, 0.05), (2.0, 0.5), (3.0, 0.4), (4.0, 0.3)]);
        let lin = linearize(&s, ModelKind::PowerLaw, 0.1, 1e-9).unwrap();
        assert_eq!(lin.dropped, 1);
        assert_eq!(lin.pairs.len(), 3);
    }
}
