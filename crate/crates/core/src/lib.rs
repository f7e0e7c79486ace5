//! Toolkit for locating "empty spots" in social interaction records: places
//! where somebody who never appears in the records must have been.
//!
//! The pipeline simulates a social network, derives basket-shaped interaction
//! records from it, deletes a node set to produce the observation, and ranks
//! the observed baskets by how likely they are to have lost a member. The
//! [`evaluation`] module scores that ranking against the ground truth with
//! precision curves.

pub mod clustering;
pub mod config;
pub mod cooccurrence;
pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod generators;
pub mod graph;
pub mod io;
pub mod plot;
pub mod predictor;
pub mod rng;

pub use error::{Error, Result};
