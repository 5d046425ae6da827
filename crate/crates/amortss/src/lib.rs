//! Amortized posterior estimation for Bayesian state-space models.
//!
//! The crate trains neural estimators that map an observed time series
//! directly to per-period marginal posterior means and standard deviations of
//! the model's hidden states. Training data comes entirely from model
//! simulations; exact Kalman-based routines and adaptive MCMC samplers are
//! included as validation baselines.

pub mod core;
pub mod error;
pub mod linalg;
pub mod sim;

pub use error::{Error, Result};
