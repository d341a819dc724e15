//! Twisted second moments: direct and decomposition routes, main-term
//! predictions, exact reciprocity formulas and the auxiliary lemma checks.

mod decomposition;
mod family;
mod lemmas;
mod reciprocity;
mod scan;
mod spec;
mod stopwatch;

pub use decomposition::{
    diagonal_closed_form, diagonal_sum, moment_decomposition, moment_orthogonality, Decomposition,
};
pub use family::{moment_direct, moment_direct_afe, EngineStats, FamilyData, MomentEngine, Weight, REALNESS_TOLERANCE};
pub use lemmas::{
    arithmetic_bound_check, arithmetic_ratio_prime_power, main_term_lemma_check, offdiag_bound_check, MainTermCheck,
    OffDiagonalCheck, Rational, XBranch,
};
pub use reciprocity::{reciprocity_one_twist, reciprocity_triple, s_parity, ReciprocityCheck, RECIPROCITY_TOLERANCE};
pub use scan::{
    one_twist_cells, scan_moments, select_moduli, summarize, trend_fit, two_twist_cells, DegreeSummary, ScanOptions,
    ScanSummary, TrendFit,
};
pub use spec::{predicted_main_term, Family, MomentReport, MomentSpec, Normalization, Route};
