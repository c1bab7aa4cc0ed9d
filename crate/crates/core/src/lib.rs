//! Sampling, clique-number computation and clique-count moments for
//! W-random graphs.

pub mod error;
pub mod experiments;
pub mod graphon;
pub mod moments;
pub mod clique;
pub mod sampler;

pub use error::{Error, Result};
pub use graphon::{GraphonSpec, Interval};
pub use sampler::{SampleConfig, SampledGraph};
