//! Hypothesis tests for community properties of stochastic block models.
//!
//! The library tests whether the (unknown, fixed) community assignment of an
//! observed graph satisfies a combinatorial property — all of a given node set
//! in one community, two node groups in the same community, or all community
//! sizes equal — against a symmetric alternative. The test statistic is a
//! plug-in log-likelihood ratio whose null quantile is estimated by a
//! Gaussian-multiplier bootstrap run on a *shadow* assignment: any convenient
//! null member stands in for the unknown truth, which is valid because the
//! property classes are closed under label/node permutations.
//!
//! Modules:
//! - [`sbm`] — model parameters, assignments, graphs, sampling, divergences;
//! - [`properties`] — property pairs, misaligned-edge combinatorics, distances,
//!   shadow assignments, boundary construction, packing numbers;
//! - [`likelihood`] — constrained maximum-likelihood fitting and the LRT;
//! - [`bootstrap`] — the shadowing multiplier bootstrap and test decision;
//! - [`oracle`] — brute-force ground truth at small `n` plus a two-point
//!   Monte Carlo risk estimator;
//! - [`edgelist`] — plain-text edge list ingestion;
//! - [`stats`] — small numeric helpers (quantiles, KS distance, eigenvalues).

pub mod bootstrap;
pub mod edgelist;
pub mod error;
pub mod likelihood;
pub mod oracle;
pub mod properties;
pub mod rng;
pub mod sbm;
pub mod stats;

pub use bootstrap::{run_test, BootstrapConfig, TestReport};
pub use error::Error;
pub use properties::{Membership, PropertyKind, PropertyPair, SizeRegime};
pub use sbm::{Assignment, Graph, SbmModel};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
