//! End-to-end analysis of `Sym^d` in `n` variables and report rendering.

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};
use thiserror::Error;

use crate::exact::{serde_q, to_f64, RadicalScalar, Rational};
use crate::mincomb::{
    minimal_combinations, to_f64_vec, MinCombError, MinimalCombination, PointSet,
};
use crate::moment::{build_f_beta, critical_value, CriticalCandidate, MomentError};
use crate::oracle::{frank_wolfe_nearest, DEFAULT_MAX_ITER};
use crate::weights::{
    in_weyl_chamber, monomial_count, monomial_latex, monomial_string, variable_names, WeightTable,
};

pub const DEFAULT_MAX_MONOMIALS: u128 = 35;
pub const TOOL_NAME: &str = "mcomb";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReportError {
    #[error("{count} monomials exceed the limit of {limit} (raise --max-monomials to override)")]
    TooLarge { count: u128, limit: u128 },
    #[error("invalid problem size: {0}")]
    InvalidSize(String),
    #[error(transparent)]
    Moment(#[from] MomentError),
    #[error(transparent)]
    MinComb(#[from] MinCombError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub n: usize,
    pub d: u32,
    pub weyl_only: bool,
    pub interior_only: bool,
    pub k_max: Option<usize>,
    pub max_monomials: u128,
    /// Leave the timestamp out so output is byte-for-byte repeatable.
    pub reproducible: bool,
}

impl AnalyzeOptions {
    pub fn new(n: usize, d: u32) -> Self {
        Self {
            n,
            d,
            weyl_only: false,
            interior_only: false,
            k_max: None,
            max_monomials: DEFAULT_MAX_MONOMIALS,
            reproducible: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    /// Seconds since the Unix epoch; absent in reproducible mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    /// SHA-256 of the canonical input description, hex encoded.
    pub input_digest: String,
}

impl Metadata {
    pub fn new(input: &[u8], reproducible: bool) -> Self {
        let timestamp = if reproducible {
            None
        } else {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .ok()
                .map(|d| d.as_secs())
        };
        Self {
            tool: TOOL_NAME.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
            input_digest: sha256_hex(input),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Where `β` sits relative to the weight polytope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    Interior,
    Boundary,
}

/// A certificate together with the form built from it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedCandidate {
    pub k: usize,
    /// Indices into the weight table.
    pub subset: Vec<usize>,
    pub candidate: CriticalCandidate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    #[serde(with = "serde_q::vec")]
    pub beta: Vec<Rational>,
    #[serde(with = "serde_q")]
    pub norm_sq: Rational,
    pub location: Location,
    pub strata: Vec<usize>,
    pub critical_value: RadicalScalar,
    pub candidates: Vec<CertifiedCandidate>,
}

impl ReportRecord {
    pub fn verified(&self) -> impl Iterator<Item = &CriticalCandidate> {
        self.candidates
            .iter()
            .map(|c| &c.candidate)
            .filter(|c| c.verified)
    }

    pub fn rejected(&self) -> impl Iterator<Item = &CriticalCandidate> {
        self.candidates
            .iter()
            .map(|c| &c.candidate)
            .filter(|c| !c.verified)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub d: u32,
    pub weyl_only: bool,
    pub interior_only: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    pub metadata: Metadata,
    pub records: Vec<ReportRecord>,
}

impl AnalysisReport {
    pub fn record(&self, beta: &[Rational]) -> Option<&ReportRecord> {
        self.records.iter().find(|r| r.beta == beta)
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

fn analysis_digest_input(opts: &AnalyzeOptions) -> Vec<u8> {
    let k = opts
        .k_max
        .map_or_else(|| "default".to_string(), |k| k.to_string());
    format!(
        "analyze n={} d={} weyl_only={} interior_only={} k_max={}",
        opts.n, opts.d, opts.weyl_only, opts.interior_only, k
    )
    .into_bytes()
}

/// Weight table → minimal combinations → optional filters → one candidate
/// form per certificate. Records are sorted by `‖β‖²`, then `β`.
pub fn analyze(opts: &AnalyzeOptions) -> Result<AnalysisReport, ReportError> {
    if opts.n < 2 {
        return Err(ReportError::InvalidSize(format!(
            "need at least 2 variables, got {}",
            opts.n
        )));
    }
    if opts.d < 1 {
        return Err(ReportError::InvalidSize("degree must be at least 1".into()));
    }
    let count = monomial_count(opts.n, opts.d);
    if count > opts.max_monomials {
        return Err(ReportError::TooLarge {
            count,
            limit: opts.max_monomials,
        });
    }

    let table = WeightTable::new(opts.n, opts.d);
    let combos: Vec<MinimalCombination> = minimal_combinations(&table.point_set(), opts.k_max)
        .into_iter()
        .filter(|m| !opts.weyl_only || in_weyl_chamber(&m.beta))
        .filter(|m| !opts.interior_only || table.in_relative_interior(&m.beta))
        .collect();

    let mut records = combos
        .par_iter()
        .map(|m| build_record(m, &table))
        .collect::<Result<Vec<_>, _>>()?;
    records.sort_by(|a, b| a.norm_sq.cmp(&b.norm_sq).then_with(|| a.beta.cmp(&b.beta)));

    Ok(AnalysisReport {
        n: opts.n,
        d: opts.d,
        weyl_only: opts.weyl_only,
        interior_only: opts.interior_only,
        k_max: opts.k_max,
        metadata: Metadata::new(&analysis_digest_input(opts), opts.reproducible),
        records,
    })
}

fn build_record(m: &MinimalCombination, table: &WeightTable) -> Result<ReportRecord, ReportError> {
    let candidates = m
        .certificates
        .iter()
        .map(|c| {
            let support: Vec<_> = c
                .subset
                .iter()
                .map(|&i| table.entries[i].alpha.clone())
                .collect();
            let candidate = build_f_beta(&m.beta, &support, &c.weights, table)?;
            Ok(CertifiedCandidate {
                k: c.k,
                subset: c.subset.clone(),
                candidate,
            })
        })
        .collect::<Result<Vec<_>, MomentError>>()?;
    let location = if table.in_relative_interior(&m.beta) {
        Location::Interior
    } else {
        Location::Boundary
    };
    Ok(ReportRecord {
        beta: m.beta.clone(),
        norm_sq: m.norm_sq.clone(),
        location,
        strata: m.strata(),
        critical_value: critical_value(&m.beta),
        candidates,
    })
}

/// Minimal combination with an optional floating-point cross-check: the
/// largest coordinate difference between `β` and the oracle's nearest point
/// for the first certifying subset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MincombRecord {
    #[serde(flatten)]
    pub combination: MinimalCombination,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_delta: Option<f64>,
}

/// Settings for the floating-point cross-check in [`run_mincomb`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    /// Relative duality-gap tolerance.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            tol: 1e-15,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

pub fn run_mincomb(
    points: &PointSet,
    k_max: Option<usize>,
    oracle: Option<OracleConfig>,
) -> Result<Vec<MincombRecord>, MinCombError> {
    minimal_combinations(points, k_max)
        .into_iter()
        .map(|combination| {
            let oracle_delta = match oracle {
                None => None,
                Some(cfg) => {
                    let subset: Vec<Vec<f64>> = points
                        .subset(&combination.certificates[0].subset)
                        .iter()
                        .map(|p| to_f64_vec(p))
                        .collect();
                    let x = frank_wolfe_nearest(&subset, cfg.tol, cfg.max_iter)?.point;
                    let delta = combination
                        .beta
                        .iter()
                        .zip(&x)
                        .map(|(b, xi)| (to_f64(b) - xi).abs())
                        .fold(0.0, f64::max);
                    Some(delta)
                }
            };
            Ok(MincombRecord {
                combination,
                oracle_delta,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
    Latex,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Self::Json),
            "table" => Ok(Self::Table),
            "latex" => Ok(Self::Latex),
            _ => Err(format!(
                "unknown format {s:?} (expected json, table or latex)"
            )),
        }
    }
}

fn vector_text(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|q| q.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn rational_latex(q: &Rational) -> String {
    let sign = if q.is_negative() { "-" } else { "" };
    let a = q.abs();
    if a.is_integer() {
        format!("{sign}{}", a.numer())
    } else {
        format!("{sign}\\frac{{{}}}{{{}}}", a.numer(), a.denom())
    }
}

fn vector_latex(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(rational_latex).collect();
    format!("({})", parts.join(", "))
}

pub fn radical_latex(r: &RadicalScalar) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (s, c)) in r.terms().enumerate() {
        let neg = c.is_negative();
        out.push_str(match (i, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        let mag = c.abs();
        let one = num_traits::One::is_one(s);
        match (one, num_traits::One::is_one(&mag)) {
            (true, _) => out.push_str(&rational_latex(&mag)),
            (false, true) => write!(out, "\\sqrt{{{s}}}").unwrap(),
            (false, false) => write!(out, "{}\\sqrt{{{s}}}", rational_latex(&mag)).unwrap(),
        }
    }
    out
}

fn pad_table(rows: &[Vec<String>]) -> String {
    let cols = rows[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(cells.join(" | ").trim_end());
        out.push('\n');
        if i == 0 {
            let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
            out.push_str(&rule.join("-+-"));
            out.push('\n');
        }
    }
    out
}

fn support_text(c: &CriticalCandidate, names: &[String], latex: bool) -> String {
    let monos: Vec<String> = c
        .support
        .iter()
        .map(|a| {
            if latex {
                monomial_latex(a, names)
            } else {
                monomial_string(a, names)
            }
        })
        .collect();
    monos.join(", ")
}

/// Renders an analysis report. Table and LaTeX output have one row per
/// candidate with columns `β | S | f | M(f)`; rejected candidates are marked.
pub fn render(report: &AnalysisReport, format: Format) -> String {
    let names = variable_names(report.n);
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Table => {
            let mut rows = vec![vec!["β".to_string(), "S".into(), "f".into(), "M(f)".into()]];
            for r in &report.records {
                for c in &r.candidates {
                    let c = &c.candidate;
                    let mut f = c.display(&names);
                    if !c.verified {
                        f.push_str("  [rejected: moment matrix not diag(β)]");
                    }
                    rows.push(vec![
                        vector_text(&r.beta),
                        support_text(c, &names, false),
                        f,
                        r.critical_value.to_string(),
                    ]);
                }
            }
            pad_table(&rows)
        }
        Format::Latex => {
            let mut s = String::from(
                "\\begin{tabular}{llll}\n\\hline\n$\\beta$ & $S$ & $f$ & $M(f)$ \\\\\n\\hline\n",
            );
            for r in &report.records {
                for c in &r.candidates {
                    let c = &c.candidate;
                    let mark = if c.verified { "" } else { " (rejected)" };
                    writeln!(
                        s,
                        "${}$ & ${}$ & ${}${} & ${}$ \\\\",
                        vector_latex(&r.beta),
                        support_text(c, &names, true),
                        c.display_latex(&names),
                        mark,
                        radical_latex(&r.critical_value)
                    )
                    .unwrap();
                }
            }
            s.push_str("\\hline\n\\end{tabular}\n");
            s
        }
    }
}

/// Renders the output of [`run_mincomb`]. JSON is an array of records.
pub fn render_mincomb(records: &[MincombRecord], format: Format) -> String {
    let with_oracle = records.iter().any(|r| r.oracle_delta.is_some());
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(records).expect("records serialize");
            s.push('\n');
            s
        }
        Format::Table => {
            let mut header = vec!["β".to_string(), "‖β‖²".into(), "k".into(), "subsets".into()];
            if with_oracle {
                header.push("oracle Δ".into());
            }
            let mut rows = vec![header];
            for r in records {
                let m = &r.combination;
                let subsets: Vec<String> = m
                    .certificates
                    .iter()
                    .map(|c| {
                        format!(
                            "{{{}}}",
                            c.subset
                                .iter()
                                .map(|i| i.to_string())
                                .collect::<Vec<_>>()
                                .join(",")
                        )
                    })
                    .collect();
                let strata: Vec<String> = m.strata().iter().map(|k| k.to_string()).collect();
                let mut row = vec![
                    vector_text(&m.beta),
                    m.norm_sq.to_string(),
                    strata.join(","),
                    subsets.join(" "),
                ];
                if with_oracle {
                    row.push(
                        r.oracle_delta
                            .map_or_else(String::new, |d| format!("{d:.3e}")),
                    );
                }
                rows.push(row);
            }
            pad_table(&rows)
        }
        Format::Latex => {
            let mut s = String::from(
                "\\begin{tabular}{lll}\n\\hline\n$\\beta$ & $\\|\\beta\\|^2$ & $k$ \\\\\n\\hline\n",
            );
            for r in records {
                let m = &r.combination;
                let strata: Vec<String> = m.strata().iter().map(|k| k.to_string()).collect();
                writeln!(
                    s,
                    "${}$ & ${}$ & ${}$ \\\\",
                    vector_latex(&m.beta),
                    rational_latex(&m.norm_sq),
                    strata.join(",")
                )
                .unwrap();
            }
            s.push_str("\\hline\n\\end{tabular}\n");
            s
        }
    }
}
