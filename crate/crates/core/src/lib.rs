//! Adam⁺ and Nadam⁺: adaptive optimizers that average stochastic gradients taken
//! at extrapolated points and normalize the step by a power of the averaged
//! gradient's norm.
//!
//! The crate is organised bottom-up:
//!
//! - [`vector`], [`rng`] and [`objective`] hold the numeric types, the seedable
//!   random streams and the gradient-oracle abstraction.
//! - [`optim`] implements the Adam⁺ family, its iteration-budget schedules and
//!   the baseline optimizers (SGD, momentum SGD, Adagrad, Adam).
//! - [`problems`] provides objectives with exact gradients and known constants,
//!   plus CSV and IDX dataset loaders.
//! - [`diagnostics`] measures estimation error, variance envelopes, stationarity
//!   bounds and the growth of `Σ‖z_i‖` along trajectories.
//! - [`harness`] runs config-driven, seed-parallel experiments and writes CSVs.

pub mod diagnostics;
pub mod error;
pub mod harness;
pub mod objective;
pub mod optim;
pub mod problems;
pub mod rng;
pub mod vector;

pub use error::{Error, Result};
pub use objective::{
    exact_gradient, finite_diff_gradient, oracle_sample, value, Constants, GradientSample,
    Objective,
};
pub use optim::{OptimizerConfig, OptimizerKind, OptimizerState, ScheduleParams};
pub use rng::RngStream;
pub use vector::ParamVector;
