//! Dense linear algebra over GF(2).

mod congruence;
mod matrix;

pub use congruence::{congruence_reduce, congruent, gram_factor, CongruenceReduction, GramFactor};
pub use matrix::{rank_of_words, Gf2Matrix};
