//! Finite, truncated models of algebraic patterns and exhaustive checks of
//! their structural conditions: factorization systems, Segal conditions,
//! soundness, extendability, fibrous patterns, envelopes and comparison maps.

pub mod catalog;
pub mod cli;
pub mod compare;
pub mod envelope;
pub mod fibrous;
pub mod fincat;
pub mod homotopy;
pub mod pattern;
pub mod span;
pub mod verdict;

pub use verdict::{Status, Verdict};
