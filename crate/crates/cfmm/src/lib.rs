//! Experiment harness for the compressed Cartesian Taylor FMM operators of
//! `cfmm-core`: PDE and configuration files, flop measurement, the accuracy,
//! operation count and FMM benchmark drivers, CSV output and numerical checks.

pub mod checks;
pub mod config;
pub mod error;
pub mod experiments;
pub mod flops;
pub mod output;
pub mod pde_file;

pub use config::{ExperimentConfig, Range, Sweep};
pub use error::{HarnessError, Result};

/// Environment variable holding the worker thread count.
pub const THREADS_VAR: &str = "CFMM_THREADS";

/// Sizes the global thread pool from `CFMM_THREADS` when it is set.
pub fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| HarnessError::Config(format!("{THREADS_VAR} must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| HarnessError::Config(e.to_string()))
}
