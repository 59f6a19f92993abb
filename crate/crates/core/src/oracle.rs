//! Floating-point nearest-point solver used to cross-check the exact engine.
//!
//! Minimizes `‖Σ λ_i p_i‖²` over the probability simplex with away-step
//! Frank–Wolfe and exact line search. Only inner products are needed and the
//! iterate never leaves the simplex. Every few iterations the weights on the
//! current active vertices are re-solved directly (with Wolfe's minor cycle
//! when that leaves the simplex), which removes the slow zig-zag tail on
//! nearly degenerate faces.

use crate::exact::{to_f64, Rational};
use crate::mincomb::MinCombError;

pub const DEFAULT_MAX_ITER: usize = 100_000;

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub point: Vec<f64>,
    pub weights: Vec<f64>,
    pub iterations: usize,
    /// Final Frank–Wolfe duality gap, an upper bound on `‖x‖² − ‖τ‖²`.
    pub gap: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn combine(points: &[Vec<f64>], weights: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; points[0].len()];
    for (p, &w) in points.iter().zip(weights) {
        if w != 0.0 {
            for (xi, pi) in x.iter_mut().zip(p) {
                *xi += w * pi;
            }
        }
    }
    x
}

/// Minimizer of `‖Σ λ_i p_i‖²` subject to `Σ λ_i = 1` over the vertices in
/// `active`, from the KKT system `[G 1; 1ᵀ 0]·[λ; μ] = [0; 1]` solved with
/// partial pivoting. `None` if the system is numerically singular.
#[allow(clippy::needless_range_loop)]
fn affine_minimizer(points: &[Vec<f64>], active: &[usize]) -> Option<Vec<f64>> {
    let k = active.len();
    let size = k + 1;
    let mut a = vec![vec![0.0; size + 1]; size];
    for (r, &i) in active.iter().enumerate() {
        for (c, &j) in active.iter().enumerate() {
            a[r][c] = dot(&points[i], &points[j]);
        }
        a[r][k] = 1.0;
        a[k][r] = 1.0;
    }
    a[k][size] = 1.0;
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    for col in 0..size {
        let piv = (col..size).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(col, piv);
        for r in 0..size {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for c in col..=size {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    Some((0..k).map(|r| a[r][size] / a[r][r]).collect())
}

/// Wolfe-style minor cycles on the current active set: move toward the
/// affine minimizer, dropping vertices whose weight reaches zero, until the
/// minimizer is feasible.
fn active_set_correction(points: &[Vec<f64>], weights: &[f64]) -> Option<Vec<f64>> {
    let mut w = weights.to_vec();
    loop {
        let active: Vec<usize> = (0..points.len()).filter(|&i| w[i] > 0.0).collect();
        if active.len() < 2 {
            return Some(w);
        }
        let v = affine_minimizer(points, &active)?;
        if v.iter().all(|&x| x > 0.0) {
            let mut out = vec![0.0; points.len()];
            for (&i, &x) in active.iter().zip(&v) {
                out[i] = x;
            }
            return Some(out);
        }
        // largest step keeping every weight non-negative; `hit` reaches zero
        let (theta, hit) = active
            .iter()
            .zip(&v)
            .filter(|&(_, &x)| x <= 0.0)
            .map(|(&i, &x)| (w[i] / (w[i] - x), i))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .expect("some weight is non-positive");
        let theta = theta.min(1.0);
        for (&i, &x) in active.iter().zip(&v) {
            w[i] += theta * (x - w[i]);
            if w[i] < 0.0 {
                w[i] = 0.0;
            }
        }
        w[hit] = 0.0;
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
    }
}

const CORRECTION_PERIOD: usize = 32;

/// Runs until the duality gap drops to `tol·max(1, max ‖p‖²)` or `max_iter`
/// is hit. Scaling by the largest squared norm keeps the stopping test above
/// the rounding floor of the gap itself.
pub fn frank_wolfe_nearest(
    points: &[Vec<f64>],
    tol: f64,
    max_iter: usize,
) -> Result<OracleResult, MinCombError> {
    if points.is_empty() {
        return Err(MinCombError::Empty);
    }
    let m = points.len();
    let start = (0..m)
        .min_by(|&i, &j| dot(&points[i], &points[i]).total_cmp(&dot(&points[j], &points[j])))
        .unwrap();
    let scale = points.iter().map(|p| dot(p, p)).fold(1.0, f64::max);
    let threshold = tol * scale;
    let mut weights = vec![0.0; m];
    weights[start] = 1.0;
    let mut x = points[start].clone();
    let mut gap = f64::INFINITY;

    for it in 0..max_iter {
        let scores: Vec<f64> = points.iter().map(|p| dot(&x, p)).collect();
        let fw = (0..m)
            .min_by(|&i, &j| scores[i].total_cmp(&scores[j]))
            .unwrap();
        let fw_dir: Vec<f64> = points[fw].iter().zip(&x).map(|(p, xi)| p - xi).collect();
        gap = -2.0 * dot(&x, &fw_dir);
        if gap <= threshold {
            if let Some(w) = active_set_correction(points, &weights) {
                let y = combine(points, &w);
                if dot(&y, &y) <= dot(&x, &x) {
                    let scores: Vec<f64> = points.iter().map(|p| dot(&y, p)).collect();
                    let best = scores.iter().copied().fold(f64::INFINITY, f64::min);
                    gap = (2.0 * (dot(&y, &y) - best)).max(0.0);
                    weights = w;
                    x = y;
                }
            }
            return Ok(OracleResult {
                point: x,
                weights,
                iterations: it,
                gap,
            });
        }
        let away = (0..m)
            .filter(|&i| weights[i] > 0.0)
            .max_by(|&i, &j| scores[i].total_cmp(&scores[j]))
            .unwrap();
        let away_dir: Vec<f64> = x.iter().zip(&points[away]).map(|(xi, p)| xi - p).collect();
        let away_gap = -2.0 * dot(&x, &away_dir);

        let (dir, step_max, is_away) = if gap >= away_gap || weights[away] >= 1.0 {
            (fw_dir, 1.0, false)
        } else {
            let wa = weights[away];
            (away_dir, wa / (1.0 - wa), true)
        };
        let dd = dot(&dir, &dir);
        if dd == 0.0 {
            break;
        }
        let step = (-dot(&x, &dir) / dd).clamp(0.0, step_max);
        if is_away {
            for w in weights.iter_mut() {
                *w *= 1.0 + step;
            }
            weights[away] -= step;
            if step >= step_max {
                weights[away] = 0.0;
            }
        } else {
            for w in weights.iter_mut() {
                *w *= 1.0 - step;
            }
            weights[fw] += step;
        }
        for w in weights.iter_mut() {
            if *w < 0.0 {
                *w = 0.0;
            }
        }
        let total: f64 = weights.iter().sum();
        for w in weights.iter_mut() {
            *w /= total;
        }
        x = combine(points, &weights);
        if (it + 1) % CORRECTION_PERIOD == 0 {
            if let Some(w) = active_set_correction(points, &weights) {
                let y = combine(points, &w);
                if dot(&y, &y) <= dot(&x, &x) {
                    weights = w;
                    x = y;
                }
            }
        }
    }
    Err(MinCombError::OracleFailed {
        iterations: max_iter,
        gap,
    })
}

/// Approximate nearest point of the convex hull of `S` to the origin; `tol`
/// is the relative duality-gap tolerance of [`frank_wolfe_nearest`].
pub fn nearest_point_oracle<P: AsRef<[Rational]>>(
    s: &[P],
    tol: f64,
) -> Result<Vec<f64>, MinCombError> {
    let points: Vec<Vec<f64>> = s
        .iter()
        .map(|p| p.as_ref().iter().map(to_f64).collect())
        .collect();
    frank_wolfe_nearest(&points, tol, DEFAULT_MAX_ITER).map(|r| r.point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn segment_example() {
        let s = [
            vec![rat(1, 1), rat(-1, 1), rat(0, 1)],
            vec![rat(-1, 1), rat(2, 1), rat(-1, 1)],
        ];
        let x = nearest_point_oracle(&s, 1e-15).unwrap();
        let exact = [2.0 / 7.0, 1.0 / 14.0, -5.0 / 14.0];
        for (a, b) in x.iter().zip(exact) {
            assert!((a - b).abs() < 1e-6, "{x:?}");
        }
    }

    #[test]
    fn single_point() {
        let x = nearest_point_oracle(&[vec![rat(1, 1), rat(0, 1)]], 1e-12).unwrap();
        assert_eq!(x, vec![1.0, 0.0]);
    }

    #[test]
    fn origin_inside_triangle() {
        let s = vec![vec![1.0, 0.0], vec![-1.0, 1.0], vec![-1.0, -1.0]];
        let r = frank_wolfe_nearest(&s, 1e-18, DEFAULT_MAX_ITER).unwrap();
        assert!(r.point.iter().all(|v| v.abs() < 1e-8), "{:?}", r.point);
        assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn iteration_cap_reports_failure() {
        let s = vec![vec![1.0, 0.0], vec![-1.0, 1.0], vec![-1.0, -1.0]];
        assert!(matches!(
            frank_wolfe_nearest(&s, 0.0, 3),
            Err(MinCombError::OracleFailed { iterations: 3, .. })
        ));
    }
}
