//! Exact extended Gini index on infinite utility streams.
//!
//! Streams are eventually periodic sequences over a finite rational
//! alphabet. The crate computes the prefix Gini functional and the welfare
//! `W(x) = −liminf W_N(x)` exactly, and checks generalized Pigou-Dalton
//! transfer instances and anonymity against it.

pub mod equity;
pub mod error;
pub mod exec;
pub mod generate;
pub mod gini;
pub mod pairing;
pub mod rational;
pub mod stream;

pub use error::Error;
pub use exec::Execution;
pub use rational::Rational;
