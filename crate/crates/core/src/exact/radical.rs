use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use super::{parse_rational, ExactError, Rational};

/// A finite sum `Σ r_k·√s_k` with rational `r_k` and distinct squarefree
/// positive integers `s_k`. Radicand 1 carries the rational part.
///
/// The term map never stores a zero coefficient, so two values are equal iff
/// their maps are equal (square roots of distinct squarefree integers are
/// linearly independent over the rationals).
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct RadicalScalar {
    terms: BTreeMap<BigUint, Rational>,
}

/// Splits `m` as `k²·f` with `f` squarefree, returning `(k, f)`.
///
/// Trial division runs while `p³ ≤ m`; what remains then has at most two
/// prime factors, so it is either a perfect square or squarefree.
pub fn squarefree_decompose(m: &BigUint) -> (BigUint, BigUint) {
    if m.is_zero() {
        return (BigUint::zero(), BigUint::one());
    }
    let mut rest = m.clone();
    let mut k = BigUint::one();
    let mut f = BigUint::one();
    let mut p = BigUint::from(2u32);
    while &p * &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            k *= p.pow(e / 2);
            if e % 2 == 1 {
                f *= &p;
            }
        }
        p += if p == BigUint::from(2u32) { 1u32 } else { 2u32 };
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        k *= r;
    } else {
        f *= rest;
    }
    (k, f)
}

/// Prime factors of a squarefree integer (used only for conjugation).
fn prime_factors(mut m: BigUint) -> Vec<BigUint> {
    let mut out = Vec::new();
    let mut p = BigUint::from(2u32);
    while &p * &p <= m {
        if (&m % &p).is_zero() {
            out.push(p.clone());
            while (&m % &p).is_zero() {
                m /= &p;
            }
        }
        p += 1u32;
    }
    if m > BigUint::one() {
        out.push(m);
    }
    out
}

/// Canonical `√q` for `q ≥ 0`.
pub fn sqrt_rational(q: &Rational) -> Result<RadicalScalar, ExactError> {
    if q.is_negative() {
        return Err(ExactError::NegativeSqrt(q.to_string()));
    }
    if q.is_zero() {
        return Ok(RadicalScalar::zero());
    }
    // √(p/r) = √(p·r) / r
    let p = q.numer().magnitude();
    let r = q.denom().magnitude();
    let (k, f) = squarefree_decompose(&(p * r));
    let coef = Rational::new(
        BigInt::from_biguint(Sign::Plus, k),
        BigInt::from_biguint(Sign::Plus, r.clone()),
    );
    Ok(RadicalScalar::term(coef, f))
}

pub fn radical_mul(a: &RadicalScalar, b: &RadicalScalar) -> RadicalScalar {
    a * b
}

impl RadicalScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::term(q, BigUint::one())
    }

    /// `coef·√radicand`; the radicand is reduced to squarefree form here.
    pub fn term(coef: Rational, radicand: BigUint) -> Self {
        let mut out = Self::zero();
        if coef.is_zero() || radicand.is_zero() {
            return out;
        }
        let (k, f) = squarefree_decompose(&radicand);
        out.terms
            .insert(f, coef * Rational::from_integer(BigInt::from(k)));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|s| s.is_one())
    }

    /// The value as a rational, if it has no irrational part.
    pub fn as_rational(&self) -> Option<Rational> {
        if !self.is_rational() {
            return None;
        }
        Some(self.rational_part())
    }

    /// Coefficient of the radicand-1 term.
    pub fn rational_part(&self) -> Rational {
        self.terms
            .get(&BigUint::one())
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `(radicand, coefficient)` pairs in ascending radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(s, c)| (s.clone(), c * q)).collect(),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    fn add_term(&mut self, radicand: BigUint, coef: Rational) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(radicand) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coef;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Flips the sign of every term whose radicand is divisible by `p`.
    fn conjugate_at(&self, p: &BigUint) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(s, c)| {
                    let c = if (s % p).is_zero() { -c } else { c.clone() };
                    (s.clone(), c)
                })
                .collect(),
        }
    }

    /// Multiplicative inverse, by multiplying through with conjugates until
    /// the denominator is rational.
    pub fn inverse(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let mut primes: Vec<BigUint> = self
            .terms
            .keys()
            .flat_map(|s| prime_factors(s.clone()))
            .collect();
        primes.sort();
        primes.dedup();
        let mut den = self.clone();
        let mut num = Self::one();
        for p in &primes {
            let conj = den.conjugate_at(p);
            num = &num * &conj;
            den = &den * &conj;
        }
        let den = den
            .as_rational()
            .expect("conjugate product of a radical sum is rational");
        Ok(num.scale(&den.recip()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ExactError> {
        Ok(self * &other.inverse()?)
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(s, c)| c.to_f64().unwrap_or(f64::NAN) * s.to_f64().unwrap_or(f64::NAN).sqrt())
            .sum()
    }
}

impl From<Rational> for RadicalScalar {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl<'a> Add<&'a RadicalScalar> for &'a RadicalScalar {
    type Output = RadicalScalar;
    fn add(self, rhs: &RadicalScalar) -> RadicalScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for RadicalScalar {
    type Output = RadicalScalar;
    fn add(mut self, rhs: RadicalScalar) -> RadicalScalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&RadicalScalar> for RadicalScalar {
    fn add_assign(&mut self, rhs: &RadicalScalar) {
        for (s, c) in &rhs.terms {
            self.add_term(s.clone(), c.clone());
        }
    }
}

impl Neg for &RadicalScalar {
    type Output = RadicalScalar;
    fn neg(self) -> RadicalScalar {
        RadicalScalar {
            terms: self.terms.iter().map(|(s, c)| (s.clone(), -c)).collect(),
        }
    }
}

impl Neg for RadicalScalar {
    type Output = RadicalScalar;
    fn neg(self) -> RadicalScalar {
        -&self
    }
}

impl<'a> Sub<&'a RadicalScalar> for &'a RadicalScalar {
    type Output = RadicalScalar;
    fn sub(self, rhs: &RadicalScalar) -> RadicalScalar {
        self + &(-rhs)
    }
}

impl Sub for RadicalScalar {
    type Output = RadicalScalar;
    fn sub(self, rhs: RadicalScalar) -> RadicalScalar {
        &self - &rhs
    }
}

impl<'a> Mul<&'a RadicalScalar> for &'a RadicalScalar {
    type Output = RadicalScalar;
    fn mul(self, rhs: &RadicalScalar) -> RadicalScalar {
        let mut out = RadicalScalar::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                // √a·√b = g·√((a/g)(b/g)) with g = gcd(a, b); both parts squarefree
                let g = a.gcd(b);
                let radicand = (a / &g) * (b / &g);
                let coef = ca * cb * Rational::from_integer(BigInt::from(g));
                out.add_term(radicand, coef);
            }
        }
        out
    }
}

impl Mul for RadicalScalar {
    type Output = RadicalScalar;
    fn mul(self, rhs: RadicalScalar) -> RadicalScalar {
        &self * &rhs
    }
}

impl fmt::Display for RadicalScalar {
    /// Plain-text form such as `1/2 + 3*sqrt(2)`; zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if s.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "sqrt({s})")?;
            } else {
                write!(f, "{mag}*sqrt({s})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RadicalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadicalScalar({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coef: String,
    radicand: String,
}

impl Serialize for RadicalScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(r, c)| TermRepr {
                coef: c.to_string(),
                radicand: r.to_string(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RadicalScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let terms = Vec::<TermRepr>::deserialize(d)?;
        let mut out = RadicalScalar::zero();
        for t in terms {
            let coef = parse_rational(&t.coef).map_err(D::Error::custom)?;
            let radicand: BigUint =
                t.radicand.trim().parse().map_err(|e| {
                    D::Error::custom(format!("invalid radicand {:?}: {e}", t.radicand))
                })?;
            out += &RadicalScalar::term(coef, radicand);
        }
        Ok(out)
    }
}
