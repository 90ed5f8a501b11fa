//! Library half of the batch pipeline: CSV ingestion, the experiment's data
//! model (six-channel IMU recordings with session metadata), analysis
//! configuration and manifest-driven batch orchestration. The `rqa-cli`
//! binary is a thin argument parser over these functions.

pub mod config;
pub mod io;
pub mod pipeline;
