//! Reliability and risk-optimal design of two-bar redundant structural
//! systems with latent connection failures.

pub mod cost;
pub mod error;
pub mod gauss;
pub mod harness;
pub mod model;
pub mod optimize;
pub mod oracle;
pub mod reliability;

pub use error::{Error, Result};
