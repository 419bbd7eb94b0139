//! The Adam⁺ optimizer family, iteration-budget schedules and baselines.

mod adamplus;
mod baseline;
mod config;
mod schedule;
mod state;

pub use adamplus::{adamplus_step, ema_update, extrapolate, step_size};
pub use baseline::baseline_step;
pub use config::{OptimizerConfig, OptimizerKind};
pub use schedule::{appendix_e_schedule, theorem3_schedule, ScheduleParams};
pub use state::{init, step, OptimizerState};
