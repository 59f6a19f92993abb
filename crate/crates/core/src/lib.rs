//! Exact minimal combinations of rational point sets, and their use in
//! finding critical points of the moment map on spaces of homogeneous forms.
//!
//! The pipeline for degree-`d` forms in `n` variables is
//! [`WeightTable`] → [`minimal_combinations`] → [`build_f_beta`] per
//! certificate, assembled by [`report::analyze`].

pub mod exact;
pub mod mincomb;
pub mod moment;
pub mod oracle;
pub mod report;
pub mod weights;

pub use exact::{rat, RadicalScalar, Rational, RationalMatrix};
pub use mincomb::{
    minimal_combinations, tau_full, Certificate, MinCombError, MinimalCombination, PointSet,
};
pub use moment::{build_f_beta, moment_matrix, CriticalCandidate, MomentMatrix, RadicalPolynomial};
pub use oracle::nearest_point_oracle;
pub use report::{AnalysisReport, AnalyzeOptions, Format};
pub use weights::{MultiIndex, WeightTable};
