//! Set-function specifications and exact evaluators.

mod ltf;
mod matroid;
mod spec;

pub use ltf::{validate_ltf, MarginReport, MAX_MARGIN_CHECK_N};
pub use matroid::{
    graphic_rank_eval, matroid_rank_bruteforce, rank2_eval, GraphicMatroid, MatroidOracle,
    Rank2Matroid, UniformMatroid, MAX_ORACLE_N,
};
pub use spec::{Coverage, FunctionSpec, Ltf, LtfOr, OrTerm, MAX_SPEC_N, MAX_TABLE_N};
