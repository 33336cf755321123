//! Noisy canonical phase estimation with stabilizer probes.
//!
//! Compares plain noisy estimation, QEC-assisted estimation and virtual
//! purification (VP) on dense density-matrix simulations.

pub mod acceptance;
pub mod error;
pub mod estimation;
pub mod experiment;
pub mod linalg;
pub mod noise;
pub mod pauli;
pub mod qec;
pub mod sampler;
pub mod stabilizer;

pub use error::{Error, Result};
