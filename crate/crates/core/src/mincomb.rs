//! Minimal combinations of a finite rational point set.
//!
//! For a subset `S`, `τ(S)` is the point of the convex hull of `S` nearest to
//! the origin. The minimal combinations of `A` are all values `τ(S)` for
//! non-empty `S ⊆ A`. Every such value is certified by an affinely independent
//! `S` whose affine-hull projection `σ(S)` has strictly positive barycentric
//! coordinates, which is what [`minimal_combinations`] enumerates.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

use crate::exact::{
    self, dot, norm_sq, rank, rat_solve, serde_q, ExactError, Rational, RationalMatrix,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MinCombError {
    #[error("invalid point set: {0}")]
    InvalidPointSet(String),
    #[error("point set is empty")]
    Empty,
    #[error("points are affinely dependent")]
    AffinelyDependent,
    #[error("point is not in the affine hull")]
    NotInHull,
    #[error("nearest-point oracle did not converge after {iterations} iterations (gap {gap:e})")]
    OracleFailed { iterations: usize, gap: f64 },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A finite set of distinct rational points, kept in input order so that
/// subset indices are reproducible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PointSetRepr", into = "PointSetRepr")]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
struct PointSetRepr {
    dim: usize,
    #[serde(with = "serde_q::matrix")]
    points: Vec<Vec<Rational>>,
}

impl TryFrom<PointSetRepr> for PointSet {
    type Error = MinCombError;
    fn try_from(r: PointSetRepr) -> Result<Self, Self::Error> {
        PointSet::new(r.dim, r.points)
    }
}

impl From<PointSet> for PointSetRepr {
    fn from(p: PointSet) -> Self {
        PointSetRepr {
            dim: p.dim,
            points: p.points,
        }
    }
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Vec<Rational>>) -> Result<Self, MinCombError> {
        if points.is_empty() {
            return Err(MinCombError::Empty);
        }
        if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.len() != dim) {
            return Err(MinCombError::InvalidPointSet(format!(
                "point {i} has {} coordinates, expected {dim}",
                p.len()
            )));
        }
        for (i, j) in (0..points.len()).tuple_combinations() {
            if points[i] == points[j] {
                return Err(MinCombError::InvalidPointSet(format!(
                    "points {i} and {j} coincide"
                )));
            }
        }
        Ok(Self { dim, points })
    }

    pub fn from_json(s: &str) -> Result<Self, String> {
        serde_json::from_str(s).map_err(|e| e.to_string())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn subset(&self, indices: &[usize]) -> Vec<&[Rational]> {
        indices.iter().map(|&i| self.points[i].as_slice()).collect()
    }
}

/// One subset certifying a minimal combination.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub k: usize,
    pub subset: Vec<usize>,
    /// Strictly positive barycentric weights of `beta`, summing to one.
    #[serde(with = "serde_q::vec")]
    pub weights: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalCombination {
    #[serde(with = "serde_q::vec")]
    pub beta: Vec<Rational>,
    #[serde(with = "serde_q")]
    pub norm_sq: Rational,
    pub certificates: Vec<Certificate>,
}

impl MinimalCombination {
    pub fn strata(&self) -> Vec<usize> {
        self.certificates.iter().map(|c| c.k).dedup().collect()
    }
}

/// `β` with its barycentric weights over the subset that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauCandidate {
    pub beta: Vec<Rational>,
    pub weights: Vec<Rational>,
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Columns `x_j − x_pivot` for `j ≠ pivot`.
fn difference_columns<P: AsRef<[Rational]>>(s: &[P], pivot: usize) -> Vec<Vec<Rational>> {
    let base = s[pivot].as_ref();
    s.iter()
        .enumerate()
        .filter(|&(j, _)| j != pivot)
        .map(|(_, x)| sub(x.as_ref(), base))
        .collect()
}

fn gram(cols: &[Vec<Rational>]) -> RationalMatrix {
    let m = cols.len();
    let mut g = RationalMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let v = dot(&cols[i], &cols[j]);
            g[(j, i)] = v.clone();
            g[(i, j)] = v;
        }
    }
    g
}

/// `S` is affinely independent iff the difference matrix `B₁` has rank `|S| − 1`.
pub fn affinely_independent<P: AsRef<[Rational]>>(s: &[P]) -> bool {
    if s.len() <= 1 {
        return true;
    }
    let cols = difference_columns(s, 0);
    rank(&RationalMatrix::from_columns(&cols)) == s.len() - 1
}

/// Solves the normal equations `BᵀB y = Bᵀ x_pivot`, so that
/// `σ(S) = x_pivot − B y` is the foot of the perpendicular from the origin
/// to the affine hull.
fn projection_coefficients<P: AsRef<[Rational]>>(
    s: &[P],
    pivot: usize,
) -> Result<(Vec<Vec<Rational>>, Vec<Rational>), MinCombError> {
    let cols = difference_columns(s, pivot);
    let rhs: Vec<Rational> = cols.iter().map(|c| dot(c, s[pivot].as_ref())).collect();
    let y = rat_solve(&gram(&cols), &rhs).map_err(|e| match e {
        ExactError::Singular => MinCombError::AffinelyDependent,
        other => other.into(),
    })?;
    Ok((cols, y))
}

/// Least-norm point of the affine hull of `S`, projecting from pivot `pivot`.
/// The result does not depend on the pivot.
pub fn min_square_with_pivot<P: AsRef<[Rational]>>(
    s: &[P],
    pivot: usize,
) -> Result<Vec<Rational>, MinCombError> {
    if s.is_empty() {
        return Err(MinCombError::Empty);
    }
    let (cols, y) = projection_coefficients(s, pivot)?;
    let mut x = s[pivot].as_ref().to_vec();
    for (c, yj) in cols.iter().zip(&y) {
        for (xi, ci) in x.iter_mut().zip(c) {
            *xi -= yj * ci;
        }
    }
    Ok(x)
}

pub fn min_square<P: AsRef<[Rational]>>(s: &[P]) -> Result<Vec<Rational>, MinCombError> {
    if !affinely_independent(s) {
        return Err(MinCombError::AffinelyDependent);
    }
    min_square_with_pivot(s, 0)
}

/// Affine coordinates of `x` with respect to an affinely independent `S`.
pub fn barycentric<P: AsRef<[Rational]>>(
    s: &[P],
    x: &[Rational],
) -> Result<Vec<Rational>, MinCombError> {
    if s.is_empty() {
        return Err(MinCombError::Empty);
    }
    let base = s[0].as_ref();
    if x.len() != base.len() {
        return Err(ExactError::DimensionMismatch {
            expected: base.len(),
            got: x.len(),
        }
        .into());
    }
    let cols = difference_columns(s, 0);
    let target = sub(x, base);
    let rhs: Vec<Rational> = cols.iter().map(|c| dot(c, &target)).collect();
    let c = rat_solve(&gram(&cols), &rhs).map_err(|e| match e {
        ExactError::Singular => MinCombError::AffinelyDependent,
        other => other.into(),
    })?;
    // least-squares solution; reject if it does not reproduce x exactly
    let mut reproduced = vec![Rational::zero(); base.len()];
    for (col, cj) in cols.iter().zip(&c) {
        for (r, v) in reproduced.iter_mut().zip(col) {
            *r += cj * v;
        }
    }
    if reproduced != target {
        return Err(MinCombError::NotInHull);
    }
    let first = Rational::one() - c.iter().sum::<Rational>();
    Ok(std::iter::once(first).chain(c).collect())
}

/// `σ(S)` with its barycentric weights when `S` is affinely independent and
/// every weight is strictly positive; `None` otherwise.
pub fn tau_candidate<P: AsRef<[Rational]>>(s: &[P]) -> Option<TauCandidate> {
    if s.is_empty() || !affinely_independent(s) {
        return None;
    }
    let (_, y) = projection_coefficients(s, 0).ok()?;
    // σ = x₀ − Σ y_j (x_j − x₀)  ⇒  ν₀ = 1 + Σ y_j,  ν_j = −y_j
    let first = Rational::one() + y.iter().sum::<Rational>();
    let weights: Vec<Rational> = std::iter::once(first).chain(y.iter().map(|v| -v)).collect();
    if !weights.iter().all(Signed::is_positive) {
        return None;
    }
    let dim = s[0].as_ref().len();
    let mut beta = vec![Rational::zero(); dim];
    for (p, w) in s.iter().zip(&weights) {
        for (b, v) in beta.iter_mut().zip(p.as_ref()) {
            *b += w * v;
        }
    }
    Some(TauCandidate { beta, weights })
}

/// Exact `τ(S)` for any non-empty `S`: the shortest certificate point over
/// all affinely independent subsets (sizes up to `dim + 1`).
pub fn tau_full<P: AsRef<[Rational]>>(s: &[P]) -> Result<Vec<Rational>, MinCombError> {
    if s.is_empty() {
        return Err(MinCombError::Empty);
    }
    let dim = s[0].as_ref().len();
    let max_k = s.len().min(dim + 1);
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    for k in 1..=max_k {
        for idx in (0..s.len()).combinations(k) {
            let sub: Vec<&[Rational]> = idx.iter().map(|&i| s[i].as_ref()).collect();
            if let Some(c) = tau_candidate(&sub) {
                let n2 = norm_sq(&c.beta);
                if best.as_ref().is_none_or(|(b, _)| n2 < *b) {
                    best = Some((n2, c.beta));
                }
            }
        }
    }
    Ok(best.expect("singletons always certify").1)
}

/// Enumerates every subset of size `1..=min(k_max, |A|)` (default
/// `k_max = dim`) in lexicographic order, keeps the ones passing
/// [`tau_candidate`], and merges certificates sharing the same `β`.
///
/// Records come out ordered by their first certificate `(k, subset)`, and
/// certificates within a record by `(k, subset)`. The result is identical
/// for any rayon pool size.
pub fn minimal_combinations(a: &PointSet, k_max: Option<usize>) -> Vec<MinimalCombination> {
    let k_max = k_max.unwrap_or(a.dim()).min(a.len());
    let mut records: Vec<MinimalCombination> = Vec::new();
    let mut by_beta: HashMap<Vec<Rational>, usize> = HashMap::new();
    for k in 1..=k_max {
        let subsets: Vec<Vec<usize>> = (0..a.len()).combinations(k).collect();
        let found: Vec<(Vec<usize>, TauCandidate)> = subsets
            .into_par_iter()
            .filter_map(|idx| {
                let c = tau_candidate(&a.subset(&idx))?;
                Some((idx, c))
            })
            .collect();
        for (subset, c) in found {
            let cert = Certificate {
                k,
                subset,
                weights: c.weights,
            };
            match by_beta.get(&c.beta) {
                Some(&i) => records[i].certificates.push(cert),
                None => {
                    by_beta.insert(c.beta.clone(), records.len());
                    records.push(MinimalCombination {
                        norm_sq: norm_sq(&c.beta),
                        beta: c.beta,
                        certificates: vec![cert],
                    });
                }
            }
        }
    }
    records
}

/// [`minimal_combinations`] on a dedicated pool of `threads` workers.
pub fn minimal_combinations_with_threads(
    a: &PointSet,
    k_max: Option<usize>,
    threads: usize,
) -> Vec<MinimalCombination> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| minimal_combinations(a, k_max))
}

/// Rational vector to floats, for comparisons against the oracle.
pub fn to_f64_vec(v: &[Rational]) -> Vec<f64> {
    v.iter().map(exact::to_f64).collect()
}
