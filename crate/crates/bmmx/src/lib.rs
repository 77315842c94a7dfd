//! Bayesian Mallows mixture modeling of rank data with assessor covariates.
//!
//! The library implements the full inference pipeline: rank distances and
//! proposal kernels ([`rank`]), the Mallows normalizing constant
//! ([`partition_function`]), covariate similarity functions ([`covariates`]),
//! the probabilistic kernel of the mixture model ([`model`]), the
//! Metropolis-within-Gibbs samplers for complete and partial rankings
//! ([`sampler`]), posterior summaries ([`posterior`]), synthetic data
//! generation and evaluation metrics ([`datagen`]), and file formats
//! ([`io`]).

pub mod covariates;
pub mod datagen;
pub mod error;
pub mod io;
pub mod model;
pub mod partition_function;
pub mod posterior;
pub mod rank;
pub mod rng;
pub mod sampler;

pub use error::{Error, Result};
