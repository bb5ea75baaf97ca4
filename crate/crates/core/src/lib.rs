//! Builds quadratic (QUBO) and higher-order (HUBO) formulations of an
//! asset-retrieval routing problem, compiles them to QAOA circuits with
//! phase-gadget factoring, simulates them noiselessly, and benchmarks
//! formulation quality against exhaustive classical oracles.

pub mod circuit;
pub mod error;
pub mod formulation;
pub mod instances;
pub mod oracle;
pub mod poly;
pub mod problem;
pub mod qaoa;
pub mod qasm;
pub mod sim;

pub use error::{Error, Result};
