//! Experiment harness for `cwyinvit`: matrix generation, bisection, inverse
//! iteration with a selectable backend, verification and CSV reporting.

pub mod config;
pub mod error;
pub mod experiment;
pub mod pool;

pub use config::{RunConfig, Settings};
pub use error::{BenchError, Result};
pub use experiment::{compare_backends, run_experiment, Comparison, RunMetrics, Thresholds};
pub use pool::{Executor, RayonExecutor};
