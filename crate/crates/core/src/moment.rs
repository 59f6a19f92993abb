//! Moment matrices of homogeneous forms and critical candidates `f_β`.
//!
//! For a form `f` of degree `d` in `n` variables the moment matrix is
//! `m(f)_{ij} = ⟨∂_i f, ∂_j f⟩ / (d‖f‖²) − (d/n)δ_{ij}`, using the inner
//! product in which monomials are orthogonal with `‖x^α‖² = α!/d!`. A
//! monomial maps to the diagonal matrix of its weight.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

use crate::exact::{norm_sq, serde_q, sqrt_rational, ExactError, RadicalScalar, Rational};
use crate::weights::{
    monomial_latex, monomial_norm_sq, monomial_string, weight_of, MultiIndex, WeightTable,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MomentError {
    #[error("polynomials live in different spaces: (n={0}, d={1}) vs (n={2}, d={3})")]
    SpaceMismatch(usize, u32, usize, u32),
    #[error("monomial {0:?} does not have {1} variables and degree {2}")]
    BadMonomial(MultiIndex, usize, u32),
    #[error("moment matrix of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("inconsistent certificate: {0}")]
    InconsistentCertificate(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Homogeneous form with real radical coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalPolynomial {
    n: usize,
    d: u32,
    terms: BTreeMap<MultiIndex, RadicalScalar>,
}

impl RadicalPolynomial {
    pub fn zero(n: usize, d: u32) -> Self {
        Self {
            n,
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(n: usize, d: u32, terms: I) -> Result<Self, MomentError>
    where
        I: IntoIterator<Item = (MultiIndex, RadicalScalar)>,
    {
        let mut f = Self::zero(n, d);
        for (alpha, c) in terms {
            f.add_term(alpha, &c)?;
        }
        Ok(f)
    }

    /// `Σ √(coeff_sq_α)·x^α`, the positive-coefficient form with prescribed
    /// squared coefficients.
    pub fn from_coeff_sq<'a, I>(n: usize, d: u32, coeff_sq: I) -> Result<Self, MomentError>
    where
        I: IntoIterator<Item = (&'a MultiIndex, &'a Rational)>,
    {
        let mut f = Self::zero(n, d);
        for (alpha, q) in coeff_sq {
            f.add_term(alpha.clone(), &sqrt_rational(q)?)?;
        }
        Ok(f)
    }

    /// Rational coefficients, e.g. for `x³ + y³ + z³`.
    pub fn from_rational_terms<I>(n: usize, d: u32, terms: I) -> Result<Self, MomentError>
    where
        I: IntoIterator<Item = (MultiIndex, Rational)>,
    {
        Self::from_terms(
            n,
            d,
            terms.into_iter().map(|(a, q)| (a, RadicalScalar::from(q))),
        )
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: &RadicalScalar) -> Result<(), MomentError> {
        if alpha.nvars() != self.n || alpha.degree() != self.d {
            return Err(MomentError::BadMonomial(alpha, self.n, self.d));
        }
        let entry = self.terms.entry(alpha).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Option<&RadicalScalar> {
        self.terms.get(alpha)
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &RadicalScalar)> {
        self.terms.iter().rev()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            n: self.n,
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(a, v)| (a.clone(), v.scale(c)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// The same form regarded as a polynomial in one extra variable.
    pub fn embed(&self) -> Self {
        Self {
            n: self.n + 1,
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.embed(), c.clone()))
                .collect(),
        }
    }
}

/// `⟨f, g⟩ = Σ_α f_α g_α ‖x^α‖²`.
pub fn poly_inner(
    f: &RadicalPolynomial,
    g: &RadicalPolynomial,
) -> Result<RadicalScalar, MomentError> {
    if f.n != g.n || f.d != g.d {
        return Err(MomentError::SpaceMismatch(f.n, f.d, g.n, g.d));
    }
    let (small, large) = if f.terms.len() <= g.terms.len() {
        (f, g)
    } else {
        (g, f)
    };
    let mut acc = RadicalScalar::zero();
    for (alpha, c) in &small.terms {
        if let Some(c2) = large.terms.get(alpha) {
            acc += &(c * c2).scale(&monomial_norm_sq(alpha));
        }
    }
    Ok(acc)
}

pub fn partial_derivative(f: &RadicalPolynomial, var: usize) -> RadicalPolynomial {
    assert!(var < f.n, "variable index out of range");
    assert!(f.d >= 1, "cannot differentiate a constant form");
    let mut out = RadicalPolynomial::zero(f.n, f.d - 1);
    for (alpha, c) in &f.terms {
        let e = alpha.exponents()[var];
        if e == 0 {
            continue;
        }
        let mut lowered = alpha.exponents().to_vec();
        lowered[var] -= 1;
        let c = c.scale(&Rational::from_integer(BigInt::from(e)));
        out.terms.insert(MultiIndex::new(lowered), c);
    }
    out
}

/// Symmetric `n × n` matrix over [`RadicalScalar`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MomentMatrix {
    entries: Vec<Vec<RadicalScalar>>,
}

impl MomentMatrix {
    pub fn from_entries(entries: Vec<Vec<RadicalScalar>>) -> Self {
        assert!(
            entries.iter().all(|r| r.len() == entries.len()),
            "square matrix"
        );
        Self { entries }
    }

    pub fn from_rational_rows(rows: Vec<Vec<Rational>>) -> Self {
        Self::from_entries(
            rows.into_iter()
                .map(|r| r.into_iter().map(RadicalScalar::from).collect())
                .collect(),
        )
    }

    pub fn diag(values: &[Rational]) -> Self {
        let n = values.len();
        let mut entries = vec![vec![RadicalScalar::zero(); n]; n];
        for (i, v) in values.iter().enumerate() {
            entries[i][i] = RadicalScalar::from(v.clone());
        }
        Self { entries }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &RadicalScalar {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<RadicalScalar>] {
        &self.entries
    }

    pub fn trace(&self) -> RadicalScalar {
        (0..self.size()).fold(RadicalScalar::zero(), |acc, i| {
            acc + self.entries[i][i].clone()
        })
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, v)| i == j || v.is_zero()))
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn diagonal(&self) -> Vec<RadicalScalar> {
        (0..self.size())
            .map(|i| self.entries[i][i].clone())
            .collect()
    }

    /// The diagonal as rationals, if every diagonal entry is rational.
    pub fn rational_diagonal(&self) -> Option<Vec<Rational>> {
        self.diagonal()
            .iter()
            .map(RadicalScalar::as_rational)
            .collect()
    }

    pub fn equals_diag(&self, beta: &[Rational]) -> bool {
        beta.len() == self.size() && *self == Self::diag(beta)
    }
}

pub fn is_diagonal(m: &MomentMatrix) -> bool {
    m.is_diagonal()
}

/// Exact moment matrix `H(f) − (d/n)I`.
pub fn moment_matrix(f: &RadicalPolynomial) -> Result<MomentMatrix, MomentError> {
    if f.is_zero() {
        return Err(MomentError::ZeroPolynomial);
    }
    let n = f.n;
    let d = Rational::from_integer(BigInt::from(f.d));
    let scale = poly_inner(f, f)?.scale(&d).inverse()?;
    let shift = RadicalScalar::from(d / Rational::from_integer(BigInt::from(n)));
    let derivs: Vec<RadicalPolynomial> = (0..n).map(|i| partial_derivative(f, i)).collect();
    let mut entries = vec![vec![RadicalScalar::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let mut v = &poly_inner(&derivs[i], &derivs[j])? * &scale;
            if i == j {
                v = &v - &shift;
            }
            entries[j][i] = v.clone();
            entries[i][j] = v;
        }
    }
    Ok(MomentMatrix { entries })
}

/// Monomials whose weights lie on the hyperplane through `β` orthogonal to
/// `β`, i.e. `⟨weight(α), β⟩ = ‖β‖²`. For `β = 0` that is every monomial.
pub fn zbeta_support(beta: &[Rational], table: &WeightTable) -> Vec<MultiIndex> {
    let target = norm_sq(beta);
    table
        .entries
        .iter()
        .filter(|e| crate::exact::dot(&e.weight, beta) == target)
        .map(|e| e.alpha.clone())
        .collect()
}

/// `M(f) = ‖β‖` in canonical radical form.
pub fn critical_value(beta: &[Rational]) -> RadicalScalar {
    sqrt_rational(&norm_sq(beta)).expect("squared norm is non-negative")
}

/// Reconstructs `m(f)` from the squared coefficients alone,
/// `Σ_α (c_α²‖x^α‖²/‖f‖²)·weight(α)`. Only meaningful when `m(f)` is
/// diagonal; returns `None` otherwise or if the result is not rational.
pub fn calpha_reconstruct(f: &RadicalPolynomial) -> Result<Option<Vec<Rational>>, MomentError> {
    if !moment_matrix(f)?.is_diagonal() {
        return Ok(None);
    }
    let inv_norm = poly_inner(f, f)?.inverse()?;
    let mut acc = vec![RadicalScalar::zero(); f.n];
    for (alpha, c) in &f.terms {
        let share = &c.square().scale(&monomial_norm_sq(alpha)) * &inv_norm;
        for (a, w) in acc.iter_mut().zip(weight_of(alpha)) {
            *a += &share.scale(&w);
        }
    }
    Ok(acc.iter().map(RadicalScalar::as_rational).collect())
}

/// Checks the embedding relation between the moment matrix of `f` in its own
/// `n'` variables and in `n = n' + 1` variables:
/// `m_n(f) = block(m_{n'}(f), −d/n') + (d/n' − d/n)·I`.
/// For cubic curves inside cubic surfaces this reads
/// `m₄(f) = block(m₃(f), −1) + ¼·I`.
#[allow(clippy::needless_range_loop)]
pub fn embed_check(f: &RadicalPolynomial) -> Result<bool, MomentError> {
    let small = moment_matrix(f)?;
    let large = moment_matrix(&f.embed())?;
    let n_small = Rational::from_integer(BigInt::from(f.n));
    let n_large = Rational::from_integer(BigInt::from(f.n + 1));
    let d = Rational::from_integer(BigInt::from(f.d));
    let shift = RadicalScalar::from(&d / &n_small - &d / &n_large);
    let n = f.n + 1;
    let mut expected = vec![vec![RadicalScalar::zero(); n]; n];
    for i in 0..f.n {
        for j in 0..f.n {
            expected[i][j] = small.get(i, j).clone();
        }
        expected[i][i] = &expected[i][i] + &shift;
    }
    expected[f.n][f.n] = RadicalScalar::from(-(&d / &n_large));
    Ok(large == MomentMatrix::from_entries(expected))
}

mod coeff_sq_map {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<MultiIndex, Rational>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        s.collect_map(m.iter().rev().map(|(a, q)| (a.key(), q.to_string())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<MultiIndex, Rational>, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        raw.iter()
            .map(|(k, v)| {
                let a = MultiIndex::from_key(k).map_err(D::Error::custom)?;
                let q = crate::exact::parse_rational(v).map_err(D::Error::custom)?;
                Ok((a, q))
            })
            .collect()
    }
}

/// A form `f_β` built from a convex certificate of `β`, together with the
/// verdict of re-checking `m(f_β) = diag(β)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalCandidate {
    #[serde(with = "serde_q::vec")]
    pub beta: Vec<Rational>,
    pub support: Vec<MultiIndex>,
    #[serde(with = "serde_q::vec")]
    pub q: Vec<Rational>,
    /// `c_α² = q_α / ‖x^α‖²`.
    #[serde(with = "coeff_sq_map")]
    pub coeff_sq: BTreeMap<MultiIndex, Rational>,
    pub verified: bool,
    #[serde(rename = "M")]
    pub critical_value: RadicalScalar,
    pub moment: MomentMatrix,
}

impl CriticalCandidate {
    pub fn nvars(&self) -> usize {
        self.beta.len()
    }

    pub fn polynomial(&self, d: u32) -> RadicalPolynomial {
        RadicalPolynomial::from_coeff_sq(self.nvars(), d, self.coeff_sq.iter())
            .expect("candidate coefficients are valid")
    }

    /// Squared coefficients rescaled to coprime positive integers, in
    /// descending monomial order.
    pub fn integer_coeff_sq(&self) -> Vec<(MultiIndex, BigInt)> {
        integer_ratios(&self.coeff_sq)
    }

    /// Human-readable form, e.g. `3*sqrt(3)*x^2z + sqrt(5)*y^3`.
    pub fn display(&self, names: &[String]) -> String {
        self.render_terms(names, false)
    }

    pub fn display_latex(&self, names: &[String]) -> String {
        self.render_terms(names, true)
    }

    fn render_terms(&self, names: &[String], latex: bool) -> String {
        let mut parts = Vec::new();
        for (alpha, k2) in self.integer_coeff_sq() {
            let c = sqrt_rational(&Rational::from_integer(k2)).expect("positive");
            let (radicand, coef) = c.terms().next().expect("nonzero coefficient");
            let coef = coef.to_integer();
            let mono = if latex {
                monomial_latex(&alpha, names)
            } else {
                monomial_string(&alpha, names)
            };
            let mut s = String::new();
            if !coef.is_one() {
                s.push_str(&coef.to_string());
            }
            if !radicand.is_one() {
                if latex {
                    s.push_str(&format!("\\sqrt{{{radicand}}}"));
                } else {
                    if !s.is_empty() {
                        s.push('*');
                    }
                    s.push_str(&format!("sqrt({radicand})"));
                }
            }
            if !s.is_empty() {
                s.push_str(if latex { "\\," } else { "*" });
            }
            s.push_str(&mono);
            parts.push(s);
        }
        parts.join(" + ")
    }
}

/// Scales a positive rational map by the lcm of its denominators and divides
/// by the gcd of the resulting numerators.
pub fn integer_ratios(m: &BTreeMap<MultiIndex, Rational>) -> Vec<(MultiIndex, BigInt)> {
    let lcm = m.values().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<(MultiIndex, BigInt)> = m
        .iter()
        .rev()
        .map(|(a, q)| (a.clone(), q.numer() * (&lcm / q.denom())))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|(a, v)| (a, v / &g)).collect()
}

/// Builds `f_β = Σ √q_α/‖x^α‖ · x^α` from a certificate `β = Σ q_α·weight(α)`
/// and checks whether its moment matrix really is `diag(β)`.
pub fn build_f_beta(
    beta: &[Rational],
    support: &[MultiIndex],
    q: &[Rational],
    table: &WeightTable,
) -> Result<CriticalCandidate, MomentError> {
    let bad = |msg: String| Err(MomentError::InconsistentCertificate(msg));
    if support.is_empty() || support.len() != q.len() {
        return bad(format!(
            "{} monomials but {} weights",
            support.len(),
            q.len()
        ));
    }
    if beta.len() != table.n {
        return bad(format!(
            "beta has {} coordinates, expected {}",
            beta.len(),
            table.n
        ));
    }
    if q.iter().any(|v| !v.is_positive()) {
        return bad("weights must be strictly positive".into());
    }
    if q.iter().sum::<Rational>() != Rational::one() {
        return bad("weights do not sum to one".into());
    }
    let mut combo = vec![Rational::zero(); table.n];
    let mut coeff_sq = BTreeMap::new();
    for (alpha, qa) in support.iter().zip(q) {
        let Some(entry) = table.entry(alpha) else {
            return bad(format!("monomial {alpha:?} is not in the table"));
        };
        for (c, w) in combo.iter_mut().zip(&entry.weight) {
            *c += qa * w;
        }
        coeff_sq.insert(alpha.clone(), qa / &entry.norm_sq);
    }
    if combo != beta {
        return bad("weighted sum of monomial weights differs from beta".into());
    }
    let f = RadicalPolynomial::from_coeff_sq(table.n, table.d, coeff_sq.iter())?;
    let moment = moment_matrix(&f)?;
    Ok(CriticalCandidate {
        beta: beta.to_vec(),
        support: support.to_vec(),
        q: q.to_vec(),
        verified: moment.equals_diag(beta),
        critical_value: critical_value(beta),
        coeff_sq,
        moment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::weights::variable_names;

    fn mono(e: &[u32]) -> MultiIndex {
        MultiIndex::from(e)
    }

    fn poly(n: usize, d: u32, terms: &[(&[u32], i64)]) -> RadicalPolynomial {
        RadicalPolynomial::from_rational_terms(
            n,
            d,
            terms.iter().map(|(e, c)| (mono(e), rat(*c, 1))),
        )
        .unwrap()
    }

    fn rows(r: &[&[(i64, i64)]]) -> MomentMatrix {
        MomentMatrix::from_rational_rows(
            r.iter()
                .map(|row| row.iter().map(|&(a, b)| rat(a, b)).collect())
                .collect(),
        )
    }

    #[test]
    fn inner_products() {
        let x3 = poly(3, 3, &[(&[3, 0, 0], 1)]);
        assert_eq!(poly_inner(&x3, &x3).unwrap(), RadicalScalar::one());
        let x2y = poly(3, 3, &[(&[2, 1, 0], 1)]);
        let xy2 = poly(3, 3, &[(&[1, 2, 0], 1)]);
        assert!(poly_inner(&x2y, &xy2).unwrap().is_zero());
        let s = poly(3, 3, &[(&[2, 1, 0], 1), (&[1, 2, 0], 1)]);
        assert_eq!(poly_inner(&s, &s).unwrap(), RadicalScalar::from(rat(2, 3)));
        let other = poly(3, 2, &[(&[2, 0, 0], 1)]);
        assert!(matches!(
            poly_inner(&s, &other),
            Err(MomentError::SpaceMismatch(..))
        ));
    }

    #[test]
    fn derivatives() {
        let x3 = poly(3, 3, &[(&[3, 0, 0], 1)]);
        assert_eq!(partial_derivative(&x3, 0), poly(3, 2, &[(&[2, 0, 0], 3)]));
        assert!(partial_derivative(&x3, 1).is_zero());
        let s = poly(3, 3, &[(&[2, 1, 0], 1), (&[1, 2, 0], 1)]);
        assert_eq!(
            partial_derivative(&s, 0),
            poly(3, 2, &[(&[1, 1, 0], 2), (&[0, 2, 0], 1)])
        );
    }

    #[test]
    fn moment_matrix_examples() {
        let x3 = poly(3, 3, &[(&[3, 0, 0], 1)]);
        assert_eq!(
            moment_matrix(&x3).unwrap(),
            MomentMatrix::diag(&[rat(2, 1), rat(-1, 1), rat(-1, 1)])
        );
        let s = poly(3, 3, &[(&[2, 1, 0], 1), (&[1, 2, 0], 1)]);
        assert_eq!(
            moment_matrix(&s).unwrap(),
            rows(&[
                &[(1, 2), (1, 1), (0, 1)],
                &[(1, 1), (1, 2), (0, 1)],
                &[(0, 1), (0, 1), (-1, 1)]
            ])
        );
        let t = poly(3, 3, &[(&[2, 1, 0], 1), (&[2, 0, 1], 1)]);
        assert_eq!(
            moment_matrix(&t).unwrap(),
            rows(&[
                &[(1, 1), (0, 1), (0, 1)],
                &[(0, 1), (-1, 2), (1, 2)],
                &[(0, 1), (1, 2), (-1, 2)]
            ])
        );
        assert_eq!(
            moment_matrix(&RadicalPolynomial::zero(3, 3)),
            Err(MomentError::ZeroPolynomial)
        );
    }

    #[test]
    fn diagonal_checks() {
        assert!(MomentMatrix::diag(&[rat(2, 1), rat(-1, 1), rat(-1, 1)]).is_diagonal());
        let s = poly(3, 3, &[(&[2, 1, 0], 1), (&[1, 2, 0], 1)]);
        assert!(!is_diagonal(&moment_matrix(&s).unwrap()));
        assert!(MomentMatrix::diag(&vec![rat(0, 1); 3]).is_diagonal());
    }

    #[test]
    fn zbeta_examples() {
        let t = WeightTable::new(3, 3);
        let got = zbeta_support(&[rat(1, 2), rat(1, 2), rat(-1, 1)], &t);
        assert_eq!(
            got,
            vec![
                mono(&[3, 0, 0]),
                mono(&[2, 1, 0]),
                mono(&[1, 2, 0]),
                mono(&[0, 3, 0])
            ]
        );
        assert_eq!(zbeta_support(&vec![rat(0, 1); 3], &t).len(), 10);
        assert_eq!(
            zbeta_support(&[rat(2, 1), rat(-1, 1), rat(-1, 1)], &t),
            vec![mono(&[3, 0, 0])]
        );
    }

    #[test]
    fn f_beta_for_segment_certificate() {
        let t = WeightTable::new(3, 3);
        let beta = [rat(2, 7), rat(1, 14), rat(-5, 14)];
        let c = build_f_beta(
            &beta,
            &[mono(&[2, 0, 1]), mono(&[0, 3, 0])],
            &[rat(9, 14), rat(5, 14)],
            &t,
        )
        .unwrap();
        assert!(c.verified);
        assert_eq!(c.coeff_sq[&mono(&[2, 0, 1])], rat(27, 14));
        assert_eq!(c.coeff_sq[&mono(&[0, 3, 0])], rat(5, 14));
        assert_eq!(
            c.display(&variable_names(3)),
            "3*sqrt(3)*x^2z + sqrt(5)*y^3"
        );
        assert_eq!(
            c.display_latex(&variable_names(3)),
            "3\\sqrt{3}\\,x^{2}z + \\sqrt{5}\\,y^{3}"
        );
        assert_eq!(
            c.critical_value.square(),
            RadicalScalar::from(norm_sq(&beta))
        );
    }

    #[test]
    fn f_beta_for_cubic_surface() {
        let t = WeightTable::new(4, 3);
        let beta = [rat(1, 4), rat(-1, 12), rat(-1, 12), rat(-1, 12)];
        let c = build_f_beta(
            &beta,
            &[mono(&[1, 0, 0, 2]), mono(&[1, 1, 1, 0])],
            &[rat(1, 3), rat(2, 3)],
            &t,
        )
        .unwrap();
        assert!(c.verified);
        assert_eq!(c.coeff_sq[&mono(&[1, 0, 0, 2])], rat(1, 1));
        assert_eq!(c.coeff_sq[&mono(&[1, 1, 1, 0])], rat(4, 1));
        assert_eq!(c.display(&variable_names(4)), "2*xyz + xw^2");
    }

    #[test]
    fn f_beta_rejected_when_not_diagonal() {
        let t = WeightTable::new(3, 3);
        let c = build_f_beta(
            &[rat(1, 2), rat(1, 2), rat(-1, 1)],
            &[mono(&[2, 1, 0]), mono(&[1, 2, 0])],
            &[rat(1, 2), rat(1, 2)],
            &t,
        )
        .unwrap();
        assert!(!c.verified);
        assert!(!c.moment.is_diagonal());
    }

    #[test]
    fn f_beta_rejects_bad_certificates() {
        let t = WeightTable::new(3, 3);
        let support = [mono(&[2, 0, 1]), mono(&[0, 3, 0])];
        let beta = [rat(2, 7), rat(1, 14), rat(-5, 14)];
        for q in [
            vec![rat(1, 2), rat(1, 2)],
            vec![rat(9, 14)],
            vec![rat(1, 1), rat(0, 1)],
            vec![rat(10, 7), rat(-3, 7)],
        ] {
            assert!(matches!(
                build_f_beta(&beta, &support, &q, &t),
                Err(MomentError::InconsistentCertificate(_))
            ));
        }
    }

    #[test]
    fn critical_values() {
        assert_eq!(
            critical_value(&[rat(2, 1), rat(-1, 1), rat(-1, 1)]).to_string(),
            "sqrt(6)"
        );
        assert_eq!(
            critical_value(&[rat(1, 1), rat(0, 1), rat(-1, 1)]).to_string(),
            "sqrt(2)"
        );
        assert!(critical_value(&vec![rat(0, 1); 3]).is_zero());
    }

    #[test]
    fn calpha_examples() {
        let x3 = poly(3, 3, &[(&[3, 0, 0], 1)]);
        assert_eq!(
            calpha_reconstruct(&x3).unwrap(),
            Some(vec![rat(2, 1), rat(-1, 1), rat(-1, 1)])
        );
        let mut coeffs = BTreeMap::new();
        coeffs.insert(mono(&[2, 0, 1]), rat(27, 1));
        coeffs.insert(mono(&[0, 3, 0]), rat(5, 1));
        let f = RadicalPolynomial::from_coeff_sq(3, 3, coeffs.iter()).unwrap();
        assert_eq!(
            calpha_reconstruct(&f).unwrap(),
            Some(vec![rat(2, 7), rat(1, 14), rat(-5, 14)])
        );
        let s = poly(3, 3, &[(&[2, 1, 0], 1), (&[1, 2, 0], 1)]);
        assert_eq!(calpha_reconstruct(&s).unwrap(), None);
    }

    #[test]
    fn embedding_relation() {
        let xyz = poly(3, 3, &[(&[1, 1, 1], 1)]);
        assert!(embed_check(&xyz).unwrap());
        assert_eq!(
            moment_matrix(&xyz.embed()).unwrap(),
            MomentMatrix::diag(&[rat(1, 4), rat(1, 4), rat(1, 4), rat(-3, 4)])
        );
        // relation holds even for non-diagonal moments
        let s = poly(3, 3, &[(&[2, 1, 0], 1), (&[1, 2, 0], 1)]);
        assert!(embed_check(&s).unwrap());
    }

    #[test]
    fn candidate_json_shape() {
        let t = WeightTable::new(3, 3);
        let c = build_f_beta(
            &[rat(2, 1), rat(-1, 1), rat(-1, 1)],
            &[mono(&[3, 0, 0])],
            &[rat(1, 1)],
            &t,
        )
        .unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.starts_with(
            r#"{"beta":["2","-1","-1"],"support":[[3,0,0]],"q":["1"],"coeff_sq":{"3,0,0":"1"},"verified":true,"M":[{"coef":"1","radicand":"6"}],"moment":[[[{"coef":"2","radicand":"1"}],[],[]]"#
        ), "{json}");
        let back: CriticalCandidate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
