//! Rank machinery over GF(2) for bounding the Z2-genus and Euler Z2-genus of graphs.
//!
//! The crate is organised bottom-up: [`gf2`] provides packed matrices and
//! congruence normal forms, [`minrank`] solves minimum-rank completions of
//! partial symmetric matrices, [`tournament`] checks rank bounds for
//! tournament-structured matrices, [`drawing`] models drawings on surfaces
//! with crosscaps at the level of crossing parities, and [`bounds`] combines
//! them into genus bounds and search certificates.

pub mod bounds;
pub mod error;
pub mod drawing;
pub mod gf2;
pub mod minrank;
pub mod tournament;

pub use error::{Error, Result};
pub use gf2::Gf2Matrix;
