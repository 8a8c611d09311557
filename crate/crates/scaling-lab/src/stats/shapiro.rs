//! Shapiro-Wilk W test for normality, algorithm AS R94.
//!
//! W is the squared correlation between the ordered sample and the
//! expected normal order-statistic coefficients (Blom scores with
//! Royston's polynomial corrections); the p-value comes from Royston's
//! normal approximation of a transform of W. Valid for 3 <= n <= 5000.
//!
//! References:
//! - Shapiro & Wilk (1965), Biometrika 52.
//! - Royston (1995), "Remark AS R94: A remark on algorithm AS 181",
//!   Applied Statistics 44, 547-551.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::special::{normal_cdf, normal_quantile};

/// Outcome of the normality screen. `pass` holds when the p-value is at
/// or above the chosen significance level, i.e. normality not rejected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub w_stat: f64,
    pub p_value: f64,
    pub n: usize,
    pub pass: bool,
}

/// Run the Shapiro-Wilk test at significance level `alpha`.
pub fn shapiro_wilk(sample: &[f64], alpha: f64) -> Result<NormalityReport> {
    let n = sample.len();
    if !(3..=5000).contains(&n) {
        return Err(Error::UnsupportedSampleSize(n));
    }
    if sample.iter().any(|v| !v.is_finite()) {
        return Err(Error::Data("sample contains non-finite values".into()));
    }

    let mut x = sample.to_vec();
    x.sort_by(|a, b| a.total_cmp(b));
    let range = x[n - 1] - x[0];
    if range <= 0.0 {
        return Err(Error::DegenerateSample);
    }

    let w = if n == 3 {
        // Single coefficient a1 = 1/sqrt(2):
        // W = [a1 (x(3) - x(1))]^2 / sum (x_i - mean)^2, exact in f64
        // for affine data.
        let mean = (x[0] + x[1] + x[2]) / 3.0;
        let ssq: f64 = x.iter().map(|v| (v - mean) * (v - mean)).sum();
        (0.5 * (x[2] - x[0]) * (x[2] - x[0]) / ssq).clamp(0.0, 1.0)
    } else {
        w_statistic(&x)?
    };
    let p_value = royston_p_value(w, n);

    Ok(NormalityReport {
        w_stat: w,
        p_value,
        n,
        pass: p_value >= alpha,
    })
}

/// Correlation-form W for n >= 4 on sorted data, computed as 1 - w1 so
/// that values near 1 keep precision.
#[allow(clippy::needless_range_loop)]
fn w_statistic(x: &[f64]) -> Result<f64> {
    let n = x.len();
    let a = coefficients(n)?;
    let range = x[n - 1] - x[0];

    // Signed coefficient at sorted position i (0-based): -a[idx] in the
    // lower half, +a[idx] in the upper half, 0 at a middle element.
    let coef_at = |i: usize| -> f64 {
        let j = n - 1 - i;
        if i == j {
            0.0
        } else {
            let idx = i.min(j) + 1;
            if i > j {
                a[idx]
            } else {
                -a[idx]
            }
        }
    };

    let mut sa = 0.0;
    let mut sx = 0.0;
    for i in 0..n {
        sa += coef_at(i);
        sx += x[i] / range;
    }
    sa /= n as f64;
    sx /= n as f64;

    let mut ssa = 0.0;
    let mut ssx = 0.0;
    let mut sax = 0.0;
    for i in 0..n {
        let asa = coef_at(i) - sa;
        let xsx = x[i] / range - sx;
        ssa += asa * asa;
        ssx += xsx * xsx;
        sax += asa * xsx;
    }

    let ssassx = (ssa * ssx).sqrt();
    let w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
    Ok((1.0 - w1).clamp(0.0, 1.0))
}

/// Royston's corrected coefficients, 1-based in `a[1..=n/2]`.
fn coefficients(n: usize) -> Result<Vec<f64>> {
    const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056];
    const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];

    let nn2 = n / 2;
    let mut a = vec![0.0f64; nn2 + 1];
    let an = n as f64;
    let an25 = an + 0.25;

    let mut summ2 = 0.0;
    for (i, ai) in a.iter_mut().enumerate().skip(1) {
        // Blom score: expected normal order statistic of the i-th smallest.
        *ai = normal_quantile((i as f64 - 0.375) / an25)?;
        summ2 += *ai * *ai;
    }
    summ2 *= 2.0;
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / an.sqrt();

    let a1 = poly(&C1, rsn) - a[1] / ssumm2;
    let (i1, fac) = if n > 5 {
        let a2 = -a[2] / ssumm2 + poly(&C2, rsn);
        let fac = ((summ2 - 2.0 * a[1] * a[1] - 2.0 * a[2] * a[2])
            / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2))
            .sqrt();
        a[2] = a2;
        (3usize, fac)
    } else {
        let fac = ((summ2 - 2.0 * a[1] * a[1]) / (1.0 - 2.0 * a1 * a1)).sqrt();
        (2usize, fac)
    };
    a[1] = a1;
    for ai in a.iter_mut().skip(i1).take(nn2.saturating_sub(i1 - 1)) {
        *ai /= -fac;
    }
    Ok(a)
}

/// Ascending-order polynomial evaluation: cc[0] + cc[1] x + ...
fn poly(cc: &[f64], x: f64) -> f64 {
    let mut acc = *cc.last().unwrap();
    for &c in cc.iter().rev().skip(1) {
        acc = acc * x + c;
    }
    acc
}

/// P(W < w) upper-tail p-value via Royston's normalizing transforms.
fn royston_p_value(w: f64, n: usize) -> f64 {
    const G: [f64; 2] = [-2.273, 0.459];
    const C3: [f64; 4] = [0.544, -0.39978, 0.025054, -6.714e-4];
    const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
    const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
    const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];

    if w >= 1.0 {
        return 1.0;
    }
    if n == 3 {
        let pi6 = 6.0 / std::f64::consts::PI;
        let stqr = (0.75f64.sqrt()).asin();
        return (pi6 * (w.sqrt().asin() - stqr)).clamp(0.0, 1.0);
    }

    let an = n as f64;
    let w1 = 1.0 - w;
    let (y, m, s) = if n <= 11 {
        let gamma = poly(&G, an);
        let y = w1.ln();
        if y >= gamma {
            return 1e-99;
        }
        let y = -(gamma - y).ln();
        (y, poly(&C3, an), poly(&C4, an).exp())
    } else {
        let y = w1.ln();
        let ln_n = an.ln();
        (y, poly(&C5, ln_n), poly(&C6, ln_n).exp())
    };
    (1.0 - normal_cdf((y - m) / s)).clamp(0.0, 1.0)
}
