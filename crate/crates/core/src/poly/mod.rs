//! Exact arithmetic: binomials, binomial-basis polynomials in `n`, integer
//! polynomials in `q`, and the sequence analyzers. No floating point.

mod binomial;
pub mod json;
mod qpoly;
mod sequence;

pub use binomial::{binom, BinomialPoly, BinomialTerm, MonomialPoly};
pub use qpoly::{
    q_binom, q_binom_by_factorials, q_binom_by_subsets, q_factorial, subset_length, QPoly,
};
pub use sequence::{
    q_seq_strongly_log_concave, strong_q_log_concavity_violation, IntSequence,
    QLogConcavityViolation,
};
