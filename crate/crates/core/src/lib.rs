//! Contour dynamics for the multi-phase Muskat problem and SQG sharp fronts,
//! with a monitor for the minimum separation between interface branches.

pub mod config;
pub mod error;
pub mod evolution;
pub mod geometry;
pub mod kernels;
pub mod monitor;
pub mod output;
pub mod quadrature;
pub mod scenario;

pub use error::{Error, Result};
