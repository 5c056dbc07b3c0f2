//! Weighted dual characterizations: weight classes, their constraint and
//! dual functionals, test weights, normalization and a family search.

mod eval;
mod params;
mod report;
mod search;
mod weight;

pub use eval::{
    constraint_s1, constraint_s2, constraint_s3, constraint_s4, dual_s1, dual_s2, dual_s3, dual_s4, evaluate_weight,
    hardy_area_functional, normalize_weight, test_weight, test_weight_s2, test_weight_s3, DualEvaluation, DualRules,
    WeightValues,
};
pub use params::{conjugate, DualParams, Theorem, DEFAULT_ALPHA, DEFAULT_APERTURE, DEFAULT_P};
pub use report::{
    equivalence_report, equivalence_row, lhs_power_value, ordering_violated, search_row, summarize, BandSummary,
    EquivalenceReport, EquivalenceRow, ReportConfig, SearchRow,
};
pub use search::{infimum_search, SearchConfig, SearchOutcome, SearchStart};
pub use weight::{Arity, Exponents, WeightSpec};
