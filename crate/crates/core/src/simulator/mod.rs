//! Seeded Monte Carlo simulation over the BPSK/AWGN channel.

mod config;
mod diagnostics;
mod runner;
mod stats;

pub use config::{
    CodeSpec, ConfigError, DecoderSpec, Omega, ResolvedCode, SimConfig, Stopping, DEFAULT_BATCH_SIZE,
    DEFAULT_MAX_TRIALS, DEFAULT_MIN_BLOCK_ERRORS,
};
pub use diagnostics::{conjecture_diagnostics, zero_mean_leaves, ConjectureParams, ConjectureReport, ZeroMeanReport};
pub use runner::{run_sweep, PointResult, Simulation, SweepError, SweepResult};
pub use stats::{pooled_z, PointStats, StageRow};
