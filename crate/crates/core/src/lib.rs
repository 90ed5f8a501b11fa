//! Nonlinear time-series analysis for scalar recordings.
//!
//! The crate covers the full pipeline from raw signal to recurrence
//! quantification:
//!
//! - [`signals`] — deterministic reference-signal generators (Lorenz x,
//!   Gaussian noise, harmonic oscillation, drifting logistic map, Brownian
//!   motion) used to validate the rest of the pipeline.
//! - [`preprocess`] — windowing, zero-mean/unit-variance normalization and
//!   Savitzky-Golay smoothing.
//! - [`embedding`] — uniform time-delay embedding plus embedding-parameter
//!   estimation (Cao's E1/E2 curves, average mutual information).
//! - [`rqa`] — recurrence matrices, the REC/DET/RATIO/ENT metrics and
//!   parameter-sensitivity sweep grids.
//! - [`projection`] — principal-component projection of an embedding to a
//!   3-D trajectory.
//!
//! Heavy operations (Cao curves, AMI, recurrence matrices, sweeps) run
//! data-parallel through rayon when the default `parallel` feature is
//! enabled, and fall back to sequential loops otherwise. Results are
//! bit-identical in both modes; see [`exec::ExecMode`].

pub mod embedding;
mod error;
pub mod exec;
pub mod preprocess;
pub mod projection;
pub mod rqa;
mod series;
pub mod signals;

pub use error::Error;
pub use series::TimeSeries;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
