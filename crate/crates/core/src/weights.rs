//! Monomials of degree-`d` forms in `n` variables and their torus weights.
//!
//! The weight of `x₁^{i₁}⋯x_n^{i_n}` is `(i₁ − d/n, …, i_n − d/n)`, the
//! diagonal moment matrix of the monomial. Monomials are always listed in
//! descending lexicographic order of their exponent vectors (`x ≻ y ≻ z ≻ w`).

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::exact::{serde_q, Rational};
use crate::mincomb::PointSet;

/// Exponent vector of a monomial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Comma-separated exponents, e.g. `"2,0,1"`; used as a JSON map key.
    pub fn key(&self) -> String {
        self.0
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn from_key(key: &str) -> Result<Self, String> {
        key.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| format!("bad exponent {t:?}: {e}"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }

    /// Same monomial with one more variable of exponent zero appended.
    pub fn embed(&self) -> Self {
        let mut e = self.0.clone();
        e.push(0);
        Self(e)
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&[u32]> for MultiIndex {
    fn from(e: &[u32]) -> Self {
        Self(e.to_vec())
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(e: [u32; N]) -> Self {
        Self(e.to_vec())
    }
}

/// All exponent vectors of length `n` summing to `d`, descending lexicographic.
pub fn multi_indices(n: usize, d: u32) -> Vec<MultiIndex> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if n == 1 {
            prefix.push(d);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for i in (0..=d).rev() {
            prefix.push(i);
            rec(n - 1, d - i, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// `C(n + d − 1, d)`, the number of degree-`d` monomials in `n` variables.
pub fn monomial_count(n: usize, d: u32) -> u128 {
    if n == 0 {
        return 0;
    }
    let (top, k) = (n as u128 + d as u128 - 1, d as u128);
    let k = k.min(top - k);
    (0..k).fold(1u128, |acc, i| acc * (top - i) / (i + 1))
}

fn factorial(k: u32) -> BigInt {
    (2..=k).fold(BigInt::one(), |acc, i| acc * i)
}

/// `‖x^α‖² = i₁!⋯i_n!/d!` under the unitarily invariant inner product.
pub fn monomial_norm_sq(alpha: &MultiIndex) -> Rational {
    let num = alpha
        .exponents()
        .iter()
        .fold(BigInt::one(), |acc, &i| acc * factorial(i));
    Rational::new(num, factorial(alpha.degree()))
}

pub fn weight_of(alpha: &MultiIndex) -> Vec<Rational> {
    let n = alpha.nvars();
    let shift = Rational::new(BigInt::from(alpha.degree()), BigInt::from(n));
    alpha
        .exponents()
        .iter()
        .map(|&i| Rational::from_integer(BigInt::from(i)) - &shift)
        .collect()
}

/// True iff the coordinates are non-increasing.
pub fn in_weyl_chamber(v: &[Rational]) -> bool {
    v.windows(2).all(|w| w[0] >= w[1])
}

/// `x, y, z, w` for up to four variables, `x1 … xn` beyond that.
pub fn variable_names(n: usize) -> Vec<String> {
    const SHORT: [&str; 4] = ["x", "y", "z", "w"];
    if n <= SHORT.len() {
        SHORT[..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

/// Plain-text monomial, e.g. `x^2y`. The empty monomial prints as `1`.
pub fn monomial_string(alpha: &MultiIndex, names: &[String]) -> String {
    assert_eq!(alpha.nvars(), names.len(), "one name per variable");
    let mut s = String::new();
    for (e, name) in alpha.exponents().iter().zip(names) {
        match e {
            0 => {}
            1 => s.push_str(name),
            _ => {
                s.push_str(name);
                s.push('^');
                s.push_str(&e.to_string());
            }
        }
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

/// LaTeX monomial, e.g. `x^{2}y`.
pub fn monomial_latex(alpha: &MultiIndex, names: &[String]) -> String {
    let mut s = String::new();
    for (e, name) in alpha.exponents().iter().zip(names) {
        match e {
            0 => {}
            1 => s.push_str(name),
            _ => s.push_str(&format!("{name}^{{{e}}}")),
        }
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub alpha: MultiIndex,
    #[serde(with = "serde_q::vec")]
    pub weight: Vec<Rational>,
    #[serde(with = "serde_q")]
    pub norm_sq: Rational,
}

/// Every monomial of `Sym^d` in `n` variables with its weight and norm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightTable {
    pub n: usize,
    pub d: u32,
    pub entries: Vec<WeightEntry>,
}

impl WeightTable {
    pub fn new(n: usize, d: u32) -> Self {
        let entries = multi_indices(n, d)
            .into_iter()
            .map(|alpha| WeightEntry {
                weight: weight_of(&alpha),
                norm_sq: monomial_norm_sq(&alpha),
                alpha,
            })
            .collect();
        Self { n, d, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn index_of(&self, alpha: &MultiIndex) -> Option<usize> {
        self.entries.iter().position(|e| &e.alpha == alpha)
    }

    pub fn entry(&self, alpha: &MultiIndex) -> Option<&WeightEntry> {
        self.entries.iter().find(|e| &e.alpha == alpha)
    }

    /// The weights as a point set, in table order.
    pub fn point_set(&self) -> PointSet {
        PointSet::new(
            self.n,
            self.entries.iter().map(|e| e.weight.clone()).collect(),
        )
        .expect("monomial weights are distinct")
    }

    /// The weight polytope is `{v : Σv = 0, v_i ≥ −d/n}`, a dilated simplex;
    /// `v` lies in its relative interior iff every coordinate exceeds `−d/n`.
    pub fn in_relative_interior(&self, v: &[Rational]) -> bool {
        let floor = -Rational::new(BigInt::from(self.d), BigInt::from(self.n));
        let sum: Rational = v.iter().sum();
        sum.is_zero() && v.iter().all(|x| *x > floor)
    }
}
