//! Self-contained statistical kernels: special functions, distribution
//! CDFs, simple-linear least squares, and the Shapiro-Wilk test.

mod shapiro;
pub mod special;

pub use shapiro::{shapiro_wilk, NormalityReport};
pub use special::{erf, erfc, f_cdf, inc_beta, ln_gamma, normal_cdf, normal_quantile, t_cdf, t_quantile};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple linear regression `v ~ slope * u + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    pub slope: f64,
    pub intercept: f64,
    /// Sum of squared residuals at the least-squares solution.
    pub ssr: f64,
    pub n: usize,
}

/// Least-squares line through `(u, v)` pairs. Needs at least two points
/// and non-constant `u`.
pub fn ols(pairs: &[(f64, f64)]) -> Result<OlsFit> {
    let n = pairs.len();
    if n < 2 {
        return Err(Error::TooFewForOls(n));
    }
    let nf = n as f64;
    let u_mean = pairs.iter().map(|p| p.0).sum::<f64>() / nf;
    let v_mean = pairs.iter().map(|p| p.1).sum::<f64>() / nf;

    let mut suu = 0.0;
    let mut suv = 0.0;
    for &(u, v) in pairs {
        suu += (u - u_mean) * (u - u_mean);
        suv += (u - u_mean) * (v - v_mean);
    }
    if suu <= 0.0 {
        return Err(Error::SingularDesign);
    }
    let slope = suv / suu;
    let intercept = v_mean - slope * u_mean;
    let ssr = pairs
        .iter()
        .map(|&(u, v)| {
            let r = v - (slope * u + intercept);
            r * r
        })
        .sum();
    Ok(OlsFit {
        slope,
        intercept,
        ssr,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_line() {
        let fit = ols(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)]).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-15);
        assert!(fit.intercept.abs() < 1e-15);
        assert!(fit.ssr < 1e-30);
    }

    #[test]
    fn constant_response() {
        let fit = ols(&[(0.0, 1.0), (1.0, 1.0), (2.0, 1.0)]).unwrap();
        assert!(fit.slope.abs() < 1e-15);
        assert!((fit.intercept - 1.0).abs() < 1e-15);
        assert!(fit.ssr < 1e-30);
    }

    #[test]
    fn hand_solved_normal_equations() {
        // Points (0,0),(1,1),(2,0): centered solve gives slope 0,
        // intercept 1/3, ssr = (1/3)^2 + (2/3)^2 + (1/3)^2 = 2/3.
        let fit = ols(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]).unwrap();
        assert!(fit.slope.abs() < 1e-15);
        assert!((fit.intercept - 1.0 / 3.0).abs() < 1e-15);
        assert!((fit.ssr - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_design_is_an_error() {
        assert!(matches!(
            ols(&[(2.0, 0.0), (2.0, 1.0), (2.0, 5.0)]),
            Err(Error::SingularDesign)
        ));
        assert!(matches!(ols(&[(0.0, 1.0)]), Err(Error::TooFewForOls(1))));
    }

    proptest! {
        #[test]
        fn ssr_invariant_under_point_order(mut pts in proptest::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 3..20)) {
            // Make u values distinct so the design is non-singular.
            for (i, p) in pts.iter_mut().enumerate() {
                p.0 += i as f64 * 100.0;
            }
            let a = ols(&pts).unwrap();
            pts.reverse();
            let b = ols(&pts).unwrap();
            prop_assert!((a.ssr - b.ssr).abs() <= 1e-9 * (1.0 + a.ssr.abs()));
            prop_assert!((a.slope - b.slope).abs() <= 1e-9 * (1.0 + a.slope.abs()));
        }

        #[test]
        fn on_line_point_leaves_fit_unchanged(seed_pts in proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 3..10), new_u in -20.0f64..20.0) {
            let mut pts = seed_pts;
            for (i, p) in pts.iter_mut().enumerate() {
                p.0 += i as f64 * 25.0;
            }
            let base = ols(&pts).unwrap();
            let new_v = base.slope * new_u + base.intercept;
            pts.push((new_u, new_v));
            let grown = ols(&pts).unwrap();
            prop_assert!((grown.slope - base.slope).abs() < 1e-8 * (1.0 + base.slope.abs()));
            prop_assert!((grown.intercept - base.intercept).abs() < 1e-8 * (1.0 + base.intercept.abs()));
            prop_assert!((grown.ssr - base.ssr).abs() < 1e-7 * (1.0 + base.ssr));
        }
    }
}
