//! Restricted h-inversion polynomials: exact enumeration, binomial-basis
//! expansions, the attached posets and their height sequences, and the
//! graded q-analogue.
//!
//! ```
//! use invpoly::{b_expansion, HSequence, PairSet};
//!
//! let h = HSequence::tail(2);
//! let s = PairSet::new(vec![(1, 3), (2, 3), (2, 4)]).unwrap();
//! let e = b_expansion(&h, &s).unwrap();
//! assert_eq!(e.count(6).unwrap(), 9.into());
//! ```

pub mod enumeration;
pub mod error;
pub mod expansions;
pub mod graded;
pub mod model;
pub mod poly;
pub mod poset;
pub mod sweep;

pub use enumeration::{
    a_star_set, b_k_set, enumerate_admissible, enumerate_admissible_graded, enumerate_ih,
    fiber_data, is_realizable, poincare, restricted_ih, t_of, FiberDatum, Limits,
};
pub use error::{Error, Result};
pub use expansions::{
    a_expansion, a_from_b, b_expansion, degree_of, expansion, fiber_expansion, is_constant, Basis,
    ExpansionResult,
};
pub use graded::{
    b_q_coefficients, graded_expansion_eval, graded_ih_oracle, length_split_check,
    verify_conjecture, verify_conjecture_all, ConjectureReport, GradedExpansion,
};
pub use model::{inv_h, is_admissible, possible_pairs, HSequence, PairSet, Permutation};
pub use poly::{BinomialPoly, IntSequence, MonomialPoly, QPoly};
pub use poset::{build_poset, Poset};
