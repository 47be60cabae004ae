//! Nonparametric clustering for mixed categorical + continuous data.
//!
//! Cluster patterns are detected by comparing, at candidate center
//! positions, the observed Hamming- and Euclidean-distance frequency curves
//! against their expected shapes under a no-cluster null (closed form for
//! the categorical lattice, Monte-Carlo for the continuous part). A
//! weighted local chi-square statistic scores each candidate; significant
//! centers are extracted together with everything inside their categorical
//! and continuous radii, and the scan repeats on the remainder.
//!
//! The crate is generic over the floating-point scalar via [`Scalar`]
//! (`f32` or `f64`); the aliases below pin the common `f64` instantiation.

pub mod assignment;
pub mod bench;
pub mod cluster;
pub mod dataset;
pub mod distance;
pub mod error;
pub mod nullmodel;
pub mod rng;
pub mod scalar;
pub mod stat;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// `f64` dataset, the instantiation the CLI works with.
pub type Dataset64 = dataset::MixedDataset<f64>;
/// `f64` engine configuration.
pub type EngineConfig64 = cluster::EngineConfig<f64>;
/// `f64` clustering outcome.
pub type ClusterResult64 = cluster::ClusterResult<f64>;
/// `f64` synthetic-benchmark configuration.
pub type SynthConfig64 = bench::SynthConfig<f64>;
