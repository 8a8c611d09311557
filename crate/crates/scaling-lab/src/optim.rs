//! Deterministic Nelder-Mead simplex minimizer.

/// Outcome of one simplex run.
#[derive(Debug, Clone)]
pub struct SimplexOutcome {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    /// True when the simplex value spread fell below the tolerance.
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Minimize `f` from `start` with per-coordinate initial steps.
/// Terminates when the best/worst value spread drops below
/// `tol * (1 + |best|)` or after `max_iters` iterations.
pub fn nelder_mead<F>(
    mut f: F,
    start: &[f64],
    step: &[f64],
    max_iters: usize,
    tol: f64,
) -> SimplexOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = start.len();
    assert!(dim > 0 && step.len() == dim);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(start.to_vec());
    for i in 0..dim {
        let mut p = start.to_vec();
        p[i] += if step[i] != 0.0 { step[i] } else { 1e-3 };
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| sanitize(f(p))).collect();

    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iters {
        iterations += 1;

        // Stable order: ties broken by index for determinism.
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| {
            values[a]
                .partial_cmp(&values[b])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        let best = order[0];
        let second_worst = order[dim - 1];
        let worst = order[dim];

        let spread = values[worst] - values[best];
        if values[best].is_finite() && spread <= tol * (1.0 + values[best].abs()) {
            converged = true;
            break;
        }

        let mut centroid = vec![0.0; dim];
        for &idx in order.iter().take(dim) {
            for d in 0..dim {
                centroid[d] += simplex[idx][d];
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }

        let reflected: Vec<f64> = (0..dim)
            .map(|d| centroid[d] + REFLECT * (centroid[d] - simplex[worst][d]))
            .collect();
        let f_reflected = sanitize(f(&reflected));

        if f_reflected < values[best] {
            let expanded: Vec<f64> = (0..dim)
                .map(|d| centroid[d] + EXPAND * (reflected[d] - centroid[d]))
                .collect();
            let f_expanded = sanitize(f(&expanded));
            if f_expanded < f_reflected {
                simplex[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
            }
            continue;
        }

        if f_reflected < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
            continue;
        }

        // Contraction: outside when the reflected point improved on the
        // worst vertex, inside otherwise.
        let (contracted, f_contracted) = if f_reflected < values[worst] {
            let p: Vec<f64> = (0..dim)
                .map(|d| centroid[d] + CONTRACT * (reflected[d] - centroid[d]))
                .collect();
            let v = sanitize(f(&p));
            if v <= f_reflected {
                (p, v)
            } else {
                shrink(&mut simplex, &mut values, best, &mut f);
                continue;
            }
        } else {
            let p: Vec<f64> = (0..dim)
                .map(|d| centroid[d] + CONTRACT * (simplex[worst][d] - centroid[d]))
                .collect();
            let v = sanitize(f(&p));
            if v < values[worst] {
                (p, v)
            } else {
                shrink(&mut simplex, &mut values, best, &mut f);
                continue;
            }
        };
        simplex[worst] = contracted;
        values[worst] = f_contracted;
    }

    let (best_idx, _) = values
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| {
            a.partial_cmp(b)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(ia.cmp(ib))
        })
        .expect("non-empty simplex");
    SimplexOutcome {
        point: simplex[best_idx].clone(),
        value: values[best_idx],
        iterations,
        converged,
    }
}

fn shrink<F>(simplex: &mut [Vec<f64>], values: &mut [f64], best: usize, f: &mut F)
where
    F: FnMut(&[f64]) -> f64,
{
    let anchor = simplex[best].clone();
    for i in 0..simplex.len() {
        if i == best {
            continue;
        }
        for d in 0..anchor.len() {
            simplex[i][d] = anchor[d] + SHRINK * (simplex[i][d] - anchor[d]);
        }
        values[i] = sanitize(f(&simplex[i]));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_quadratic_bowl() {
        let f = |p: &[f64]| (p[0] - 1.5).powi(2) + 3.0 * (p[1] + 0.5).powi(2);
        let out = nelder_mead(f, &[0.0, 0.0], &[0.5, 0.5], 500, 1e-14);
        assert!(out.converged);
        assert!((out.point[0] - 1.5).abs() < 1e-6);
        assert!((out.point[1] + 0.5).abs() < 1e-6);
        assert!(out.value < 1e-12);
    }

    #[test]
    fn minimizes_rosenbrock_reasonably() {
        let f = |p: &[f64]| (1.0 - p[0]).powi(2) + 100.0 * (p[1] - p[0] * p[0]).powi(2);
        let mut best = nelder_mead(&f, &[-1.2, 1.0], &[0.1, 0.1], 2000, 1e-14);
        for _ in 0..4 {
            let restart = nelder_mead(&f, &best.point, &[0.05, 0.05], 2000, 1e-14);
            if restart.value < best.value {
                best = restart;
            }
        }
        assert!((best.point[0] - 1.0).abs() < 1e-4, "{:?}", best.point);
        assert!((best.point[1] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn deterministic_across_runs() {
        let f = |p: &[f64]| p[0].sin() + (p[1] - 2.0).powi(2) + p[0].powi(2) * 0.1;
        let a = nelder_mead(f, &[3.0, 0.0], &[0.7, 0.7], 800, 1e-13);
        let b = nelder_mead(f, &[3.0, 0.0], &[0.7, 0.7], 800, 1e-13);
        assert_eq!(a.point, b.point);
        assert_eq!(a.value, b.value);
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn survives_infinite_regions() {
        // Objective is +inf on half the plane; the simplex must retreat.
        let f = |p: &[f64]| {
            if p[0] > 2.0 {
                f64::INFINITY
            } else {
                (p[0] - 1.0).powi(2) + p[1].powi(2)
            }
        };
        let out = nelder_mead(f, &[1.9, 0.5], &[0.5, 0.5], 500, 1e-14);
        assert!((out.point[0] - 1.0).abs() < 1e-5);
        assert!(out.point[1].abs() < 1e-5);
    }
}
