//! Uniform time-delay embedding and embedding-parameter estimation.
//!
//! The embedding dimension m is selected with Cao's method: the curve
//! E1(m) = E(m+1)/E(m) flattens once m reaches the minimum embedding
//! dimension, and E2(m) distinguishes deterministic signals (E2 varies with
//! m) from stochastic ones (E2 ≈ 1 everywhere). The delay τ is selected as
//! the first local minimum of the average mutual information between the
//! series and its lagged copy.

use crate::exec::{self, ExecMode};
use crate::{Error, Result, TimeSeries};

/// The pair (m, τ) describing a delay reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingParams {
    pub dimension_m: usize,
    pub delay_tau: usize,
}

impl EmbeddingParams {
    pub fn new(dimension_m: usize, delay_tau: usize) -> Result<Self> {
        if dimension_m == 0 || delay_tau == 0 {
            return Err(Error::InvalidParameter(format!(
                "embedding dimension and delay must be at least 1, got m={dimension_m}, tau={delay_tau}"
            )));
        }
        Ok(Self {
            dimension_m,
            delay_tau,
        })
    }
}

/// The uniform time-delay matrix: N−(m−1)τ rows of m delayed copies,
/// row r = (x[r], x[r+τ], …, x[r+(m−1)τ]).
#[derive(Debug, Clone, PartialEq)]
pub struct DelayEmbedding {
    data: Vec<f64>,
    n_rows: usize,
    params: EmbeddingParams,
    source_len: usize,
}

impl DelayEmbedding {
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    /// Number of columns, i.e. the embedding dimension m.
    pub fn dim(&self) -> usize {
        self.params.dimension_m
    }

    pub fn params(&self) -> EmbeddingParams {
        self.params
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    pub fn row(&self, r: usize) -> &[f64] {
        let m = self.params.dimension_m;
        &self.data[r * m..(r + 1) * m]
    }

    /// All rows as one row-major slice.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Build the uniform time-delay embedding of a series.
pub fn utde_embed(x: &TimeSeries, params: EmbeddingParams) -> Result<DelayEmbedding> {
    let samples = x.samples();
    let n = samples.len();
    let m = params.dimension_m;
    let tau = params.delay_tau;
    let span = (m - 1) * tau;
    if n <= span {
        return Err(Error::SeriesTooShort {
            required: span + 1,
            actual: n,
        });
    }
    let rows = n - span;
    let mut data = Vec::with_capacity(rows * m);
    for r in 0..rows {
        for c in 0..m {
            data.push(samples[r + c * tau]);
        }
    }
    Ok(DelayEmbedding {
        data,
        n_rows: rows,
        params,
        source_len: n,
    })
}

/// Cao's E1/E2 curves, indexed by m = 1..=m_max.
#[derive(Debug, Clone, PartialEq)]
pub struct CaoCurves {
    e1: Vec<f64>,
    e2: Vec<f64>,
    tau_used: usize,
    skipped_per_m: Vec<usize>,
}

impl CaoCurves {
    /// E1(m) for m = 1..=m_max; index 0 holds m = 1.
    pub fn e1(&self) -> &[f64] {
        &self.e1
    }

    /// E2(m) for m = 1..=m_max; index 0 holds m = 1.
    pub fn e2(&self) -> &[f64] {
        &self.e2
    }

    pub fn tau_used(&self) -> usize {
        self.tau_used
    }

    /// How many points were dropped from each E(m) sum because their
    /// nearest neighbor sat at distance exactly zero (index 0 holds m = 1,
    /// running through m_max + 1).
    pub fn skipped_per_m(&self) -> &[usize] {
        &self.skipped_per_m
    }
}

/// Statistics of one Cao level: E(m), E*(m) and the skipped-point count.
struct CaoLevel {
    e: f64,
    e_star: f64,
    skipped: usize,
}

/// Maximum-coordinate distance between the m-dimensional delay vectors
/// starting at i and j.
#[inline]
fn max_norm_dist(samples: &[f64], i: usize, j: usize, m: usize, tau: usize) -> f64 {
    let mut acc = 0.0f64;
    for c in 0..m {
        let d = (samples[i + c * tau] - samples[j + c * tau]).abs();
        if d > acc {
            acc = d;
        }
    }
    acc
}

fn cao_level(samples: &[f64], m: usize, tau: usize, mode: ExecMode) -> Result<CaoLevel> {
    let n = samples.len();
    let count = n - m * tau; // points whose (m+1)-dim extension exists
    debug_assert!(count >= 2);

    // For each point: the E(m) ratio (None when the m-dim nearest-neighbor
    // distance is exactly zero) and the E*(m) term.
    let terms: Vec<(Option<f64>, f64)> = exec::map_indexed(mode, count, |i| {
        let mut best = f64::INFINITY;
        let mut nearest = usize::MAX;
        for j in 0..count {
            if j == i {
                continue;
            }
            // The max-norm only grows coordinate by coordinate, so bail out
            // as soon as the partial distance cannot beat the incumbent.
            let mut acc = 0.0f64;
            let mut alive = true;
            for c in 0..m {
                let d = (samples[i + c * tau] - samples[j + c * tau]).abs();
                if d > acc {
                    acc = d;
                    if acc >= best {
                        alive = false;
                        break;
                    }
                }
            }
            if alive && acc < best {
                best = acc;
                nearest = j;
            }
        }
        let dist_m = best;
        let dist_m1 = max_norm_dist(samples, i, nearest, m + 1, tau);
        let ratio = if dist_m == 0.0 {
            None
        } else {
            Some(dist_m1 / dist_m)
        };
        let e_star_term = (samples[i + m * tau] - samples[nearest + m * tau]).abs();
        (ratio, e_star_term)
    });

    let mut sum = 0.0;
    let mut valid = 0usize;
    let mut star_sum = 0.0;
    for (ratio, star) in &terms {
        if let Some(r) = ratio {
            sum += r;
            valid += 1;
        }
        star_sum += star;
    }
    if valid == 0 {
        return Err(Error::CaoDegenerate { m });
    }
    Ok(CaoLevel {
        e: sum / valid as f64,
        e_star: star_sum / count as f64,
        skipped: count - valid,
    })
}

/// Compute Cao's E1 and E2 curves for m = 1..=m_max at a fixed delay.
///
/// Nearest neighbors are found under the maximum-coordinate norm with
/// deterministic smallest-index tie-breaking; points whose neighbor
/// distance is exactly zero are skipped from the E(m) mean and reported in
/// [`CaoCurves::skipped_per_m`].
pub fn cao_curves(x: &TimeSeries, tau: usize, m_max: usize) -> Result<CaoCurves> {
    cao_curves_with_mode(x, tau, m_max, ExecMode::default())
}

pub fn cao_curves_with_mode(
    x: &TimeSeries,
    tau: usize,
    m_max: usize,
    mode: ExecMode,
) -> Result<CaoCurves> {
    if tau == 0 || m_max == 0 {
        return Err(Error::InvalidParameter(
            "tau and m_max must be at least 1".into(),
        ));
    }
    let n = x.len();
    // E1(m_max) needs E(m_max + 1), whose sum runs over N − (m_max+1)τ
    // points and needs at least a point and its neighbor.
    let required = (m_max + 1) * tau + 2;
    if n < required {
        return Err(Error::SeriesTooShort {
            required,
            actual: n,
        });
    }
    let samples = x.samples();
    let levels: Vec<Result<CaoLevel>> = (1..=m_max + 1)
        .map(|m| cao_level(samples, m, tau, mode))
        .collect();
    let mut e = Vec::with_capacity(m_max + 1);
    let mut e_star = Vec::with_capacity(m_max + 1);
    let mut skipped = Vec::with_capacity(m_max + 1);
    for level in levels {
        let level = level?;
        e.push(level.e);
        e_star.push(level.e_star);
        skipped.push(level.skipped);
    }
    let mut e1 = Vec::with_capacity(m_max);
    let mut e2 = Vec::with_capacity(m_max);
    for m in 0..m_max {
        if e[m] == 0.0 || e_star[m] == 0.0 {
            return Err(Error::CaoDegenerate { m: m + 1 });
        }
        e1.push(e[m + 1] / e[m]);
        e2.push(e_star[m + 1] / e_star[m]);
    }
    Ok(CaoCurves {
        e1,
        e2,
        tau_used: tau,
        skipped_per_m: skipped,
    })
}

/// Smallest m whose E1 values stay inside 1 ± `plateau_band` from m to the
/// end of the curve. Returns the 1-based dimension.
pub fn select_min_dimension(curves: &CaoCurves, plateau_band: f64) -> Result<usize> {
    if !plateau_band.is_finite() || plateau_band <= 0.0 {
        return Err(Error::InvalidParameter(
            "plateau band must be positive".into(),
        ));
    }
    let e1 = &curves.e1;
    let inside = |v: f64| (v - 1.0).abs() <= plateau_band;
    let mut from_here = vec![false; e1.len()];
    let mut all = true;
    for idx in (0..e1.len()).rev() {
        all = all && inside(e1[idx]);
        from_here[idx] = all;
    }
    from_here
        .iter()
        .position(|&ok| ok)
        .map(|idx| idx + 1)
        .ok_or(Error::NoPlateau { band: plateau_band })
}

/// Average mutual information I(τ) in bits for τ = 0..=tau_max.
#[derive(Debug, Clone, PartialEq)]
pub struct AmiCurve {
    values_bits: Vec<f64>,
    bins: usize,
    degenerate: bool,
}

impl AmiCurve {
    /// I(τ) in bits; index τ runs from 0 to tau_max.
    pub fn values_bits(&self) -> &[f64] {
        &self.values_bits
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    /// True when the input was constant (a single occupied bin), in which
    /// case the whole curve is zero.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }
}

/// Joint-histogram mutual information between x(n) and x(n+τ), in bits.
///
/// Both coordinates share one equal-width bin grid spanning
/// [min(x), max(x)]; marginals are the row and column sums of the joint
/// histogram, so I(τ) ≥ 0 and exact independence yields exactly zero.
pub fn ami_curve(x: &TimeSeries, tau_max: usize, bins: usize) -> Result<AmiCurve> {
    ami_curve_with_mode(x, tau_max, bins, ExecMode::default())
}

pub fn ami_curve_with_mode(
    x: &TimeSeries,
    tau_max: usize,
    bins: usize,
    mode: ExecMode,
) -> Result<AmiCurve> {
    if tau_max == 0 {
        return Err(Error::InvalidParameter("tau_max must be at least 1".into()));
    }
    if bins < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 histogram bins, got {bins}"
        )));
    }
    let n = x.len();
    if n < tau_max + 2 * bins {
        return Err(Error::SeriesTooShort {
            required: tau_max + 2 * bins,
            actual: n,
        });
    }
    let samples = x.samples();
    let (min, max) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if min == max {
        return Ok(AmiCurve {
            values_bits: vec![0.0; tau_max + 1],
            bins,
            degenerate: true,
        });
    }
    let width = (max - min) / bins as f64;
    let bin_of = |v: f64| (((v - min) / width) as usize).min(bins - 1);
    let bin_ids: Vec<usize> = samples.iter().map(|&v| bin_of(v)).collect();

    let values_bits = exec::map_indexed(mode, tau_max + 1, |tau| {
        let pairs = n - tau;
        let mut joint = vec![0u64; bins * bins];
        for k in 0..pairs {
            joint[bin_ids[k] * bins + bin_ids[k + tau]] += 1;
        }
        let mut row = vec![0u64; bins];
        let mut col = vec![0u64; bins];
        for i in 0..bins {
            for j in 0..bins {
                let c = joint[i * bins + j];
                row[i] += c;
                col[j] += c;
            }
        }
        let total = pairs as f64;
        let mut info = 0.0;
        for i in 0..bins {
            for j in 0..bins {
                let c = joint[i * bins + j];
                if c == 0 {
                    continue;
                }
                let p_ij = c as f64 / total;
                let p_i = row[i] as f64 / total;
                let p_j = col[j] as f64 / total;
                info += p_ij * (p_ij / (p_i * p_j)).log2();
            }
        }
        info
    });

    Ok(AmiCurve {
        values_bits,
        bins,
        degenerate: false,
    })
}

/// Result of the first-local-minimum scan over an AMI curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FirstMinimum {
    /// Delay of the minimum, or tau_max when the curve never turned up.
    pub tau: usize,
    /// True when the curve was monotone nonincreasing throughout.
    pub monotone: bool,
}

/// First τ ≥ 1 where the curve has finished descending and strictly rises
/// next; a flat bottom resolves to the index just before the rise. A curve
/// that never rises returns tau_max with the monotone flag set.
pub fn first_local_minimum(curve: &AmiCurve) -> Result<FirstMinimum> {
    let values = &curve.values_bits;
    if values.len() < 3 {
        return Err(Error::SeriesTooShort {
            required: 3,
            actual: values.len(),
        });
    }
    for tau in 1..values.len() - 1 {
        if values[tau] <= values[tau - 1] && values[tau + 1] > values[tau] {
            return Ok(FirstMinimum {
                tau,
                monotone: false,
            });
        }
    }
    Ok(FirstMinimum {
        tau: values.len() - 1,
        monotone: true,
    })
}

/// Arithmetic mean of a collection of embedding parameters, each component
/// rounded half-up to the nearest integer.
pub fn consensus_params(per_series: &[EmbeddingParams]) -> Result<EmbeddingParams> {
    if per_series.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let count = per_series.len() as f64;
    let mean_m = per_series.iter().map(|p| p.dimension_m as f64).sum::<f64>() / count;
    let mean_tau = per_series.iter().map(|p| p.delay_tau as f64).sum::<f64>() / count;
    EmbeddingParams::new(mean_m.round() as usize, mean_tau.round() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(samples: Vec<f64>) -> TimeSeries {
        TimeSeries::new(samples, 1.0, "test").unwrap()
    }

    fn indexed(n: usize) -> TimeSeries {
        // x[i] = i + 1 so sample k (1-based) has value k.
        series((1..=n).map(|v| v as f64).collect())
    }

    #[test]
    fn twenty_samples_m5_tau3() {
        let emb = utde_embed(&indexed(20), EmbeddingParams::new(5, 3).unwrap()).unwrap();
        assert_eq!(emb.n_rows(), 8);
        assert_eq!(emb.dim(), 5);
        assert_eq!(emb.row(0), &[1.0, 4.0, 7.0, 10.0, 13.0]);
        assert_eq!(emb.row(7), &[8.0, 11.0, 14.0, 17.0, 20.0]);
    }

    #[test]
    fn thousand_samples_m7_tau11() {
        let emb = utde_embed(&indexed(1000), EmbeddingParams::new(7, 11).unwrap()).unwrap();
        assert_eq!(emb.n_rows(), 934);
        assert_eq!(emb.dim(), 7);
        assert_eq!(emb.row(0), &[1.0, 12.0, 23.0, 34.0, 45.0, 56.0, 67.0]);
        let last = emb.row(933);
        assert_eq!(last[6], 1000.0);
    }

    #[test]
    fn one_dimensional_embedding_is_the_series() {
        let x = series(vec![0.5, -1.0, 2.5, 3.0]);
        let emb = utde_embed(&x, EmbeddingParams::new(1, 7).unwrap()).unwrap();
        assert_eq!(emb.n_rows(), 4);
        assert_eq!(emb.as_slice(), x.samples());
    }

    #[test]
    fn too_short_series_reports_minimum() {
        let err = utde_embed(&indexed(12), EmbeddingParams::new(5, 3).unwrap()).unwrap_err();
        assert_eq!(
            err,
            Error::SeriesTooShort {
                required: 13,
                actual: 12
            }
        );
    }

    #[test]
    fn plateau_selection_examples() {
        let curves = CaoCurves {
            e1: vec![0.3, 0.7, 0.96, 0.99, 1.0],
            e2: vec![1.0; 5],
            tau_used: 1,
            skipped_per_m: vec![],
        };
        assert_eq!(select_min_dimension(&curves, 0.05).unwrap(), 3);

        let all_in = CaoCurves {
            e1: vec![1.0, 0.98, 1.02],
            ..curves.clone()
        };
        assert_eq!(select_min_dimension(&all_in, 0.05).unwrap(), 1);

        let none = CaoCurves {
            e1: vec![0.3, 0.5, 0.7],
            ..curves
        };
        assert_eq!(
            select_min_dimension(&none, 0.05),
            Err(Error::NoPlateau { band: 0.05 })
        );
    }

    #[test]
    fn first_minimum_examples() {
        let curve = |values: Vec<f64>| AmiCurve {
            values_bits: values,
            bins: 16,
            degenerate: false,
        };
        let m = first_local_minimum(&curve(vec![3.0, 1.0, 2.0, 0.5])).unwrap();
        assert_eq!((m.tau, m.monotone), (1, false));

        let m = first_local_minimum(&curve(vec![5.0, 4.0, 3.0, 2.0, 1.0])).unwrap();
        assert_eq!((m.tau, m.monotone), (4, true));

        let m = first_local_minimum(&curve(vec![3.0, 2.0, 2.0, 2.5])).unwrap();
        assert_eq!((m.tau, m.monotone), (2, false));
    }

    #[test]
    fn consensus_examples() {
        let p = |m, t| EmbeddingParams::new(m, t).unwrap();
        assert_eq!(consensus_params(&[p(6, 8)]).unwrap(), p(6, 8));
        assert_eq!(consensus_params(&[p(5, 7), p(7, 9)]).unwrap(), p(6, 8));
        assert_eq!(
            consensus_params(&[p(5, 8), p(6, 8), p(6, 9)]).unwrap(),
            p(6, 8)
        );
        assert_eq!(consensus_params(&[]), Err(Error::EmptyCollection));
    }

    #[test]
    fn ami_zero_lag_is_marginal_entropy() {
        let x = crate::signals::gen_gaussian_noise(3, 1200).unwrap();
        let curve = ami_curve(&x, 10, 16).unwrap();
        let samples = x.samples();
        let (min, max) = samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        let width = (max - min) / 16.0;
        let mut counts = [0u64; 16];
        for &v in samples {
            counts[(((v - min) / width) as usize).min(15)] += 1;
        }
        let total = samples.len() as f64;
        let entropy: f64 = counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / total;
                -p * p.log2()
            })
            .sum();
        assert!((curve.values_bits()[0] - entropy).abs() < 1e-9);
        for &v in curve.values_bits() {
            assert!(v >= 0.0);
            assert!(curve.values_bits()[0] >= v - 1e-12);
        }
    }

    #[test]
    fn ami_exact_independence_is_zero() {
        // Period-4 pattern 0,0,1,1 over 4k+1 samples: at τ = 1 the joint
        // histogram factorizes exactly into its marginals.
        let k = 30;
        let mut samples = Vec::with_capacity(4 * k + 1);
        for i in 0..4 * k + 1 {
            samples.push(if (i / 2) % 2 == 0 { 0.0 } else { 1.0 });
        }
        let curve = ami_curve(&series(samples), 1, 16).unwrap();
        assert_eq!(curve.values_bits()[1], 0.0);
    }

    #[test]
    fn ami_constant_series_is_degenerate() {
        let curve = ami_curve(&series(vec![2.0; 100]), 5, 8).unwrap();
        assert!(curve.is_degenerate());
        assert!(curve.values_bits().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn ami_rejects_underfilled_histograms() {
        let x = crate::signals::gen_gaussian_noise(1, 40).unwrap();
        assert!(matches!(
            ami_curve(&x, 10, 16),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn cao_modes_agree_bit_for_bit() {
        let x = crate::signals::gen_gaussian_noise(11, 400).unwrap();
        let seq = cao_curves_with_mode(&x, 2, 6, ExecMode::Sequential).unwrap();
        let par = cao_curves_with_mode(&x, 2, 6, ExecMode::Parallel).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn ami_modes_agree_bit_for_bit() {
        let x = crate::signals::gen_gaussian_noise(11, 600).unwrap();
        let seq = ami_curve_with_mode(&x, 20, 16, ExecMode::Sequential).unwrap();
        let par = ami_curve_with_mode(&x, 20, 16, ExecMode::Parallel).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn cao_rejects_short_series() {
        let x = indexed(30);
        assert!(matches!(
            cao_curves(&x, 5, 10),
            Err(Error::SeriesTooShort { .. })
        ));
    }
}
