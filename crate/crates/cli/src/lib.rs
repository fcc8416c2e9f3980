//! Library surface of the command-line harness: configuration, simulation
//! sweeps, and score-network ingestion. The `sbmtest` binary is a thin
//! wrapper over these modules.

pub mod config;
pub mod ingest;
pub mod simulate;
