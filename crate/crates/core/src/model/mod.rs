//! Value types shared by every other module: h-sequences, permutations and
//! pair sets, with the h-inversion statistic and the admissibility test.

mod hseq;
mod pairs;
mod permutation;

pub use hseq::HSequence;
pub use pairs::{
    in_possible_pairs, inv_h, is_admissible, is_admissible_in_window, is_h_closed, possible_pairs,
    PairSet,
};
pub use permutation::Permutation;

pub(crate) use permutation::{next_permutation, word_length};

/// Number of ordinary inversions of `pi`.
pub fn length(pi: &Permutation) -> usize {
    pi.length()
}

/// The flattening of `pi_1 .. pi_k` to a permutation of `[k]`.
pub fn flatten(pi: &Permutation, k: usize) -> Permutation {
    pi.flatten(k)
}
