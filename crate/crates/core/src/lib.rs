//! Exact solvers for search-and-pursuit games.
//!
//! A hider picks one of `n` locations; a searcher inspects any set of
//! locations whose total search time fits a budget, and captures the hider
//! with probability `p_i` if the hider's location `i` was inspected. The
//! crate enumerates the searcher's undominated sets, solves the resulting
//! matrix game exactly over the rationals, provides closed-form solutions
//! for the special families where one is known, solves a two-round game in
//! which escape probabilities are learned, and independently certifies every
//! answer.

pub mod closed_forms;
pub mod error;
pub mod game;
pub mod learning;
pub mod lp;
pub mod matrix;
pub mod oracle;
pub mod rational;

pub use error::{Error, MonotoneViolation, Result};
pub use game::{GameSpec, HiderStrategy, PayoffMatrix, SearchSet};
pub use lp::MixedSolution;
pub use matrix::Matrix;
pub use rational::Rational;
