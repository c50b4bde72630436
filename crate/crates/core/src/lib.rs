//! Gaussian-formalism quantum Fisher information for seeded, lossy linear
//! and nonlinear interferometers.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod interferometer;
pub mod optimize;
pub mod qfi;
pub mod verify;

pub use error::{Error, Result};
