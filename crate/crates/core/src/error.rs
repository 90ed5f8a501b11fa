use thiserror::Error;

/// Errors produced by the analysis pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violated its documented constraint.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A series was empty where at least one sample is required.
    #[error("time series must contain at least one sample")]
    EmptySeries,

    /// A sample was NaN or infinite.
    #[error("non-finite sample at index {index}")]
    NonFiniteSample { index: usize },

    /// The ODE integrator left the finite domain.
    #[error("integration diverged to a non-finite state at step {step}")]
    IntegrationDiverged { step: usize },

    /// Normalization of a constant series (sample standard deviation is zero).
    #[error("degenerate variance: series is constant, cannot normalize")]
    DegenerateVariance,

    /// A series was shorter than an operation requires.
    #[error("series too short: need at least {required} samples, got {actual}")]
    SeriesTooShort { required: usize, actual: usize },

    /// A window did not fit inside its source series.
    #[error("window out of bounds: offset {offset} + length {length} exceeds series length {len}")]
    WindowOutOfBounds {
        offset: usize,
        length: usize,
        len: usize,
    },

    /// Cao's E1 curve never settled inside the plateau band.
    #[error("no E1 plateau within ±{band} of 1; raise m_max or widen the band")]
    NoPlateau { band: f64 },

    /// Every point of a Cao sum was skipped (all states identical).
    #[error("degenerate Cao statistic at m = {m}: no valid neighbor ratios")]
    CaoDegenerate { m: usize },

    /// Consensus over an empty parameter collection.
    #[error("cannot take a consensus over an empty collection")]
    EmptyCollection,

    /// RATIO is DET/REC and is undefined when REC is zero.
    #[error("RATIO undefined: recurrence rate is zero")]
    RatioUndefined,

    /// A matrix entry was NaN or infinite.
    #[error("non-finite embedding entry at row {row}, column {col}")]
    NonFiniteEntry { row: usize, col: usize },
}
