//! Fixtures and matching helpers shared by the integration tests.
#![allow(dead_code)]

use itertools::Itertools;
use mcomb_core::report::{AnalysisReport, ReportRecord};
use mcomb_core::{rat, CriticalCandidate, MultiIndex, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Distinct points with coordinates in [-3, 3] and denominators up to 4.
pub fn random_points(rng: &mut ChaCha8Rng, dim: usize, count: usize) -> Vec<Vec<Rational>> {
    let mut pts: Vec<Vec<Rational>> = Vec::new();
    while pts.len() < count {
        let d = rng.gen_range(1..=4i64);
        let p: Vec<Rational> = (0..dim)
            .map(|_| rat(rng.gen_range(-3 * d..=3 * d), d))
            .collect();
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts
}

/// Dimension 1 to 4 and 1 to 8 points.
pub fn random_set(rng: &mut ChaCha8Rng) -> Vec<Vec<Rational>> {
    let dim = rng.gen_range(1..=4);
    let count = rng.gen_range(1..=8);
    random_points(rng, dim, count)
}

pub fn q(s: &str) -> Rational {
    mcomb_core::exact::parse_rational(s).unwrap()
}

pub fn vq(xs: &[&str]) -> Vec<Rational> {
    xs.iter().map(|s| q(s)).collect()
}

/// Parses monomials like `x^2z` or `xw^2` over the variables `x, y, z, w`.
pub fn mono(s: &str, n: usize) -> MultiIndex {
    let names = ['x', 'y', 'z', 'w'];
    let mut e = vec![0u32; n];
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let v = names
            .iter()
            .position(|&c| c == chars[i])
            .expect("variable name");
        i += 1;
        let mut p = 1;
        if i < chars.len() && chars[i] == '^' {
            p = chars[i + 1].to_digit(10).unwrap();
            i += 2;
        }
        e[v] += p;
    }
    MultiIndex::new(e)
}

/// A form given by integer squared coefficients, e.g. `3√3·x²z + √5·y³`
/// is `[("x^2z", 27), ("y^3", 5)]`.
#[derive(Clone, Debug)]
pub struct FormFixture {
    pub beta: Vec<Rational>,
    pub terms: Vec<(&'static str, i64)>,
}

impl FormFixture {
    pub fn coeff_sq(&self, n: usize) -> BTreeMap<MultiIndex, Rational> {
        self.terms
            .iter()
            .map(|(m, c)| (mono(m, n), rat(*c, 1)))
            .collect()
    }

    pub fn label(&self) -> String {
        self.terms
            .iter()
            .map(|(m, c)| format!("{c}:{m}"))
            .join(" + ")
    }
}

fn fx(beta: &[&str], terms: &[(&'static str, i64)]) -> FormFixture {
    FormFixture {
        beta: vq(beta),
        terms: terms.to_vec(),
    }
}

/// Same support and proportional squared coefficients.
pub fn proportional(
    a: &BTreeMap<MultiIndex, Rational>,
    b: &BTreeMap<MultiIndex, Rational>,
) -> bool {
    if a.len() != b.len() || !a.keys().eq(b.keys()) {
        return false;
    }
    let (k0, v0) = a.iter().next().unwrap();
    let ratio = v0 / &b[k0];
    a.iter().all(|(k, v)| v / &b[k] == ratio)
}

fn permute(m: &BTreeMap<MultiIndex, Rational>, perm: &[usize]) -> BTreeMap<MultiIndex, Rational> {
    m.iter()
        .map(|(a, v)| {
            let e = a.exponents();
            (
                MultiIndex::new(perm.iter().map(|&p| e[p]).collect()),
                v.clone(),
            )
        })
        .collect()
}

pub fn proportional_up_to_permutation(
    a: &BTreeMap<MultiIndex, Rational>,
    b: &BTreeMap<MultiIndex, Rational>,
    n: usize,
) -> bool {
    (0..n)
        .permutations(n)
        .any(|p| proportional(a, &permute(b, &p)))
}

pub fn find_candidate<'a>(
    rec: &'a ReportRecord,
    f: &FormFixture,
    n: usize,
    up_to_permutation: bool,
) -> Option<&'a CriticalCandidate> {
    let want = f.coeff_sq(n);
    rec.candidates.iter().map(|c| &c.candidate).find(|c| {
        if up_to_permutation {
            proportional_up_to_permutation(&c.coeff_sq, &want, n)
        } else {
            proportional(&c.coeff_sq, &want)
        }
    })
}

pub fn record<'a>(rep: &'a AnalysisReport, beta: &[Rational]) -> Result<&'a ReportRecord, String> {
    rep.record(beta)
        .ok_or_else(|| format!("beta {beta:?} missing from report"))
}

/// Checks that the record for `f.beta` holds a candidate matching `f` with
/// the expected verdict.
pub fn expect_candidate(
    rep: &AnalysisReport,
    f: &FormFixture,
    verified: bool,
    up_to_permutation: bool,
) -> Result<(), String> {
    let rec = record(rep, &f.beta)?;
    let c = find_candidate(rec, f, rep.n, up_to_permutation)
        .ok_or_else(|| format!("no candidate {} at beta {:?}", f.label(), f.beta))?;
    if c.verified != verified {
        return Err(format!(
            "candidate {} at {:?}: verified = {}",
            f.label(),
            f.beta,
            c.verified
        ));
    }
    Ok(())
}

pub fn curve_chamber_betas() -> Vec<Vec<Rational>> {
    vec![
        vq(&["2", "-1", "-1"]),
        vq(&["1", "0", "-1"]),
        vq(&["0", "0", "0"]),
        vq(&["1", "-1/2", "-1/2"]),
        vq(&["1/2", "1/2", "-1"]),
        vq(&["2/7", "1/14", "-5/14"]),
        vq(&["1/2", "0", "-1/2"]),
    ]
}

/// Verified cubic-curve forms, as squared coefficients.
pub fn curve_verified() -> Vec<FormFixture> {
    vec![
        fx(&["2/7", "1/14", "-5/14"], &[("x^2z", 27), ("y^3", 5)]),
        fx(&["1/2", "1/2", "-1"], &[("x^3", 1), ("xy^2", 9)]),
        fx(&["1/2", "1/2", "-1"], &[("x^3", 1), ("y^3", 1)]),
        fx(&["1/2", "1/2", "-1"], &[("x^2y", 9), ("y^3", 1)]),
        fx(&["1/2", "0", "-1/2"], &[("x^2z", 1), ("xy^2", 1)]),
        fx(&["0", "0", "0"], &[("x^2z", 1), ("y^2z", 1)]),
        fx(&["0", "0", "0"], &[("x^2y", 1), ("z^2y", 1)]),
        fx(&["0", "0", "0"], &[("xz^2", 1), ("xy^2", 1)]),
        fx(&["0", "0", "0"], &[("x^3", 1), ("y^3", 1), ("z^3", 1)]),
    ]
}

/// Cubic-curve forms whose moment matrix is not diagonal, with that matrix.
pub fn curve_rejected() -> Vec<(FormFixture, Vec<Vec<Rational>>)> {
    vec![
        (
            fx(&["1/2", "1/2", "-1"], &[("x^2y", 1), ("xy^2", 1)]),
            vec![
                vq(&["1/2", "1", "0"]),
                vq(&["1", "1/2", "0"]),
                vq(&["0", "0", "-1"]),
            ],
        ),
        (
            fx(&["1", "-1/2", "-1/2"], &[("x^2y", 1), ("x^2z", 1)]),
            vec![
                vq(&["1", "0", "0"]),
                vq(&["0", "-1/2", "1/2"]),
                vq(&["0", "1/2", "-1/2"]),
            ],
        ),
    ]
}

/// Verified cubic-surface forms at interior `β`; the flag says whether the
/// form is only determined up to a permutation of the variables.
pub fn surface_verified() -> Vec<(FormFixture, bool)> {
    vec![
        (
            fx(
                &["1/4", "-1/12", "-1/12", "-1/12"],
                &[("xw^2", 1), ("xyz", 4)],
            ),
            false,
        ),
        (
            fx(&["1/2", "0", "0", "-1/2"], &[("xyz", 6), ("x^2w", 1)]),
            false,
        ),
        (
            fx(&["1/4", "1/4", "-1/4", "-1/4"], &[("x^2y", 1), ("z^2w", 1)]),
            true,
        ),
        (
            fx(
                &["15/76", "3/76", "3/76", "-21/76"],
                &[("z^3", 5), ("y^3", 5), ("x^2w", 27)],
            ),
            false,
        ),
        (
            fx(
                &["15/76", "3/76", "3/76", "-21/76"],
                &[("z^3", 5), ("y^2z", 45), ("x^2w", 54)],
            ),
            false,
        ),
        (
            fx(
                &["9/20", "3/20", "-3/20", "-9/20"],
                &[("xyz", 36), ("y^3", 1), ("x^2w", 9)],
            ),
            false,
        ),
        (
            fx(
                &["1/4", "1/4", "-1/4", "-1/4"],
                &[("z^2w", 1), ("xyz", 4), ("x^2w", 1)],
            ),
            true,
        ),
        (
            fx(
                &["33/100", "9/100", "-3/100", "-39/100"],
                &[("xz^2", 27), ("y^3", 7), ("x^2w", 27)],
            ),
            false,
        ),
        (
            fx(
                &["27/140", "3/140", "-9/140", "-3/20"],
                &[("xyw", 63), ("xz^2", 18), ("y^3", 1)],
            ),
            false,
        ),
        (
            fx(
                &["3/44", "3/44", "-1/44", "-5/44"],
                &[("xz^2", 8), ("y^2w", 9), ("x^2w", 5)],
            ),
            false,
        ),
        (
            fx(
                &["1/2", "0", "0", "-1/2"],
                &[("xz^2", 3), ("xy^2", 3), ("x^2w", 2)],
            ),
            false,
        ),
        (
            fx(
                &["1/4", "3/28", "-1/28", "-9/28"],
                &[("xz^2", 1), ("y^2z", 3), ("x^2w", 3)],
            ),
            false,
        ),
        (
            fx(
                &["3/20", "1/20", "-1/20", "-3/20"],
                &[("xz^2", 3), ("y^2z", 1), ("xyw", 12)],
            ),
            false,
        ),
    ]
}

/// `xyz + yzw` at `(1/4, 1/4, −1/4, −1/4)`, up to permutation; not critical.
pub fn surface_rejected() -> FormFixture {
    fx(&["1/4", "1/4", "-1/4", "-1/4"], &[("xyz", 1), ("yzw", 1)])
}
