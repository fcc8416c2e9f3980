//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Two inputs that must describe the same node set disagree on length.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A probability or other scalar argument is outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A property pair whose parameters violate its invariants.
    #[error("invalid property pair: {0}")]
    InvalidPair(String),

    /// A structurally valid pair that cannot be realised on this (n, K),
    /// e.g. a constrained node set larger than a community can hold.
    #[error("infeasible property pair: {0}")]
    InfeasiblePair(String),

    /// Fitted densities satisfy p̂ ≤ q̂; the test assumes an assortative model
    /// and is refused rather than run with a flipped sign.
    #[error("assortativity violation: p_hat = {p_hat} <= q_hat = {q_hat}")]
    AssortativityViolation { p_hat: f64, q_hat: f64 },

    /// An exhaustive-search guard (enumeration or packing size cap) tripped.
    #[error("oracle guard exceeded: {0}")]
    GuardExceeded(String),

    /// Malformed permutation argument.
    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),

    /// Text input (edge list, score file, group file) failed to parse.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
