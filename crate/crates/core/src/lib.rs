//! Unfairness measurement with inequality indices.
//!
//! Classifier outcomes are mapped to per-individual benefits ([`benefit`]),
//! whose inequality is measured with the generalized entropy family and split
//! into between-group and within-group parts ([`inequality`], [`partition`]).
//! The remaining modules load data, train linear classifiers with and without
//! a covariance fairness constraint, run threshold and constraint sweeps, and
//! check the theoretical tradeoffs by exhaustive enumeration.

pub mod analysis;
pub mod benefit;
pub mod dataio;
pub mod error;
pub mod fairtrain;
pub mod fixtures;
pub mod inequality;
pub mod model;
pub mod partition;
pub mod seed;
pub mod verify;

pub use error::{Error, Result};
