//! Library surface of the `workstats` CLI: configuration, command
//! implementations, output writers and the validation suite.

pub mod commands;
pub mod config;
pub mod output;
pub mod validate;

use thiserror::Error;

/// Errors mapped onto process exit codes: config problems exit 2, engine
/// failures exit 3, validation failures exit 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("engine error: {0}")]
    Engine(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("validation failed: {0}")]
    ValidationFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ValidationFailed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Engine(_) | CliError::Io(_) => 3,
        }
    }
}


/// Build the global rayon pool, honoring the WORKSTATS_THREADS cap.
pub fn init_thread_pool() {
    if let Ok(v) = std::env::var("WORKSTATS_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                // ignore failure: the pool may already exist in tests
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}
