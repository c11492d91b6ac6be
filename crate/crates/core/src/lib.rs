//! Regular model checking by sampling, increment detection and extrapolation.
//!
//! The crate is layered bottom-up: [`automaton`] and [`ops`] are the
//! finite-word kernel, [`weak`] adds weak Büchi automata, [`transducer`]
//! and [`counter`] build relations and counter-word automata on top, and
//! [`increments`], [`extrapolate`], [`correctness`] and [`engine`] implement
//! the semi-algorithm.

#![allow(clippy::needless_range_loop)]

pub mod alphabet;
pub mod automaton;
pub mod builders;
pub mod correctness;
pub mod counter;
pub mod engine;
pub mod error;
pub mod extrapolate;
pub mod format;
pub mod increments;
pub mod ops;
pub mod report;
pub mod scc;
pub mod transducer;
pub mod weak;

pub use alphabet::{Alphabet, Symbol};
pub use automaton::{Automaton, Kind, Lasso, StateId, Word};
pub use error::AutomataError;
