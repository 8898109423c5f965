//! Library side of the `mixent` command: configuration, sweeps, dumps,
//! analysis and the checkpoint runner.

pub mod analyze;
pub mod checkpoints;
pub mod config;
pub mod dump;
pub mod sweep;

pub use analyze::{analyze, AnalysisReport};
pub use checkpoints::{run_checkpoints, Checkpoint, CheckpointOptions};
pub use config::{LambdaGrid, StateKind, SweepConfig};
pub use dump::{read_density, write_density};
pub use sweep::{run_points, run_sweep, Execution, PointResult, SweepRow};
