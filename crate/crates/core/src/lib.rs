//! Gaussian steering toolkit: symplectic linear algebra on covariance
//! matrices, the steering measure and its monogamy residuals, residual
//! Gaussian steering of pure three-mode states, and secret-sharing key rates.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod monogamy;
pub mod qss;
pub mod states;
pub mod steering;
pub mod symplectic;
pub mod verify;

pub use error::{Result, SteerError};
pub use symplectic::{CovarianceMatrix, ModePartition, SymplecticForm, Tolerances};

/// Version tag written into every JSON document.
pub const SCHEMA: &str = "steerlab/v1";
