//! Batch analysis configuration, read from a `key=value` text file.
//! Unknown keys are rejected so typos cannot silently fall back to
//! defaults.

use std::str::FromStr;

use anyhow::{bail, Context, Result};
use rqa_core::rqa::Norm;

/// Whether batch entries use the fixed embedding parameters from the
/// config or estimate (m, τ) per series with Cao's method and AMI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamMode {
    Fixed,
    Estimate,
}

impl FromStr for ParamMode {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fixed" => Ok(ParamMode::Fixed),
            "estimate" => Ok(ParamMode::Estimate),
            other => bail!("unknown mode {other:?}, expected fixed|estimate"),
        }
    }
}

/// Analysis settings shared by every batch entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    pub m: usize,
    pub tau: usize,
    pub eps: f64,
    pub norm: Norm,
    pub dmin: usize,
    pub bins: usize,
    pub plateau: f64,
    pub mode: ParamMode,
    /// Largest dimension tried in estimate mode.
    pub m_max: usize,
    /// Largest delay tried in estimate mode.
    pub tau_max: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            m: 6,
            tau: 8,
            eps: 1.0,
            norm: Norm::Euclidean,
            dmin: 2,
            bins: 16,
            plateau: 0.05,
            mode: ParamMode::Fixed,
            m_max: 12,
            tau_max: 20,
        }
    }
}

impl AnalysisConfig {
    /// Parse `key=value` lines; `#` starts a comment, blank lines are
    /// skipped. Keys: m, tau, eps, norm, dmin, bins, plateau,
    /// mode={fixed|estimate}, m_max, tau_max.
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("config line {}: expected key=value", idx + 1))?;
            let key = key.trim();
            let value = value.trim();
            let ctx = || format!("config line {}: bad value for {key}", idx + 1);
            match key {
                "m" => config.m = value.parse().with_context(ctx)?,
                "tau" => config.tau = value.parse().with_context(ctx)?,
                "eps" => config.eps = value.parse().with_context(ctx)?,
                "norm" => {
                    config.norm = value
                        .parse()
                        .map_err(|e| anyhow::anyhow!("{e}"))
                        .with_context(ctx)?
                }
                "dmin" => config.dmin = value.parse().with_context(ctx)?,
                "bins" => config.bins = value.parse().with_context(ctx)?,
                "plateau" => config.plateau = value.parse().with_context(ctx)?,
                "mode" => config.mode = value.parse().with_context(ctx)?,
                "m_max" => config.m_max = value.parse().with_context(ctx)?,
                "tau_max" => config.tau_max = value.parse().with_context(ctx)?,
                other => bail!("config line {}: unknown key {other:?}", idx + 1),
            }
        }
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_the_fixed_analysis_parameters() {
        let c = AnalysisConfig::default();
        assert_eq!((c.m, c.tau, c.eps), (6, 8, 1.0));
        assert_eq!(c.norm, Norm::Euclidean);
        assert_eq!(c.dmin, 2);
        assert_eq!(c.mode, ParamMode::Fixed);
    }

    #[test]
    fn parses_overrides_and_comments() {
        let c = AnalysisConfig::parse(
            "# sweep setup\nm = 4\ntau=2\neps=0.5\nmode=estimate\nnorm=maximum\n\n",
        )
        .unwrap();
        assert_eq!((c.m, c.tau, c.eps), (4, 2, 0.5));
        assert_eq!(c.mode, ParamMode::Estimate);
        assert_eq!(c.norm, Norm::Maximum);
    }

    #[test]
    fn rejects_unknown_keys() {
        let err = AnalysisConfig::parse("epsilon=1\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("unknown key"), "{err}");
    }

    #[test]
    fn rejects_missing_equals() {
        assert!(AnalysisConfig::parse("m 6\n").is_err());
    }
}
