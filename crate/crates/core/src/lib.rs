//! Random tuples of words in free groups: Stallings graphs, small
//! cancellation, malnormality, Markovian automata and Monte Carlo sweeps.
//!
//! Numerical code is generic over a scalar type. `f64` is the default for
//! sampling and spectral work; [`BigRational`] gives exact validation.

pub mod cancellation;
pub mod error;
pub mod experiments;
pub mod markov;
pub mod presentations;
pub mod scalar;
pub mod stallings;
pub mod suffix;
pub mod trie;
pub mod tuples;
pub mod union_find;
pub mod words;

pub use num_rational::BigRational;

pub use cancellation::{cprime_violation, max_piece_per_rotation, satisfies_cprime, Lambda, PieceTable};
pub use error::{Error, Result};
pub use markov::{MarkovianAutomaton, Sampler, SpectralSummary};
pub use scalar::{Probability, SpectralScalar};
pub use stallings::{fiber_product, is_malnormal, stallings_graph, StallingsGraph};
pub use tuples::{MalnormalityCertificate, WordTuple};
pub use words::{Alphabet, Letter, ReducedWord};

/// Automaton with `f64` weights.
pub type Automaton = MarkovianAutomaton<f64>;
/// Automaton with exact rational weights.
pub type ExactAutomaton = MarkovianAutomaton<BigRational>;
/// Spectral summary in `f64`.
pub type Spectral = SpectralSummary<f64>;
/// Single-precision automaton.
pub type Automaton32 = MarkovianAutomaton<f32>;
