use crate::{Error, Result};

/// A uniformly sampled scalar time series — the universal input of the
/// pipeline.
///
/// Invariants enforced at construction: the sample vector is non-empty,
/// every value is finite, and the sample rate is strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    samples: Vec<f64>,
    sample_rate_hz: f64,
    label: String,
}

impl TimeSeries {
    /// Build a series, validating the invariants.
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64, label: impl Into<String>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        if !sample_rate_hz.is_finite() || sample_rate_hz <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sample rate must be a positive finite value, got {sample_rate_hz}"
            )));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
            label: label.into(),
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// A series is never empty, kept for idiomatic completeness.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Same sample rate and label, new sample values.
    pub fn with_samples(&self, samples: Vec<f64>) -> Result<Self> {
        Self::new(samples, self.sample_rate_hz, self.label.clone())
    }
}
