//! Recurrence matrices, the four recurrence-quantification metrics and
//! parameter-sensitivity sweep grids.
//!
//! A recurrence matrix marks every pair of reconstructed states within
//! threshold ε of each other (boundary inclusive, so identical states are
//! always recurrent and the line of identity is always set). From it derive:
//!
//! - REC — fraction of recurrent cells off the line of identity,
//! - DET — fraction of those cells lying on diagonal lines of length ≥ d_min,
//! - RATIO — DET/REC, undefined when REC is zero,
//! - ENT — Shannon entropy (natural log) of the diagonal line-length
//!   distribution restricted to lengths ≥ d_min.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::embedding::{utde_embed, DelayEmbedding, EmbeddingParams};
use crate::exec::{self, ExecMode};
use crate::{Error, Result, TimeSeries};

/// Distance norm used when comparing reconstructed states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    /// L2. The default.
    Euclidean,
    /// L1, the coordinate-difference sum.
    Manhattan,
    /// L∞, the maximum coordinate difference.
    Maximum,
}

impl Norm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Norm::Euclidean => "euclidean",
            Norm::Manhattan => "manhattan",
            Norm::Maximum => "maximum",
        }
    }
}

impl std::str::FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" | "l2" => Ok(Norm::Euclidean),
            "manhattan" | "l1" => Ok(Norm::Manhattan),
            "maximum" | "max" | "linf" => Ok(Norm::Maximum),
            other => Err(Error::InvalidParameter(format!(
                "unknown norm {other:?}, expected euclidean|manhattan|maximum"
            ))),
        }
    }
}

/// Distance between two equal-length state vectors. Sums run in coordinate
/// order so results are reproducible bit-for-bit.
#[inline]
pub fn state_distance(a: &[f64], b: &[f64], norm: Norm) -> f64 {
    match norm {
        Norm::Euclidean => a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt(),
        Norm::Manhattan => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
        Norm::Maximum => a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max),
    }
}

/// Symmetric boolean recurrence matrix with the threshold and norm that
/// produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceMatrix {
    size: usize,
    bits: Vec<bool>,
    epsilon: f64,
    norm: Norm,
}

impl RecurrenceMatrix {
    /// Wrap an explicit bit pattern, validating symmetry and the line of
    /// identity.
    pub fn from_bits(bits: Vec<bool>, size: usize, epsilon: f64, norm: Norm) -> Result<Self> {
        if size < 2 || bits.len() != size * size {
            return Err(Error::InvalidParameter(format!(
                "bit vector of length {} does not form an N×N matrix with N = {size} ≥ 2",
                bits.len()
            )));
        }
        for i in 0..size {
            if !bits[i * size + i] {
                return Err(Error::InvalidParameter(format!(
                    "line of identity must be recurrent, cell ({i}, {i}) is not"
                )));
            }
            for j in 0..i {
                if bits[i * size + j] != bits[j * size + i] {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self {
            size,
            bits,
            epsilon,
            norm,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn bit(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.size + j]
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    /// Recurrent cells off the line of identity.
    pub fn off_identity_count(&self) -> u64 {
        let mut count = 0u64;
        for i in 0..self.size {
            for j in 0..self.size {
                if i != j && self.bits[i * self.size + j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Binary PGM (P5) image of the plot: one byte per cell, 0 where the
    /// cell is recurrent (black), 255 otherwise, with matrix row 0 at the
    /// bottom of the image.
    pub fn to_pgm_bytes(&self) -> Vec<u8> {
        let n = self.size;
        let mut out = format!("P5\n{n} {n}\n255\n").into_bytes();
        out.reserve(n * n);
        for i in (0..n).rev() {
            for j in 0..n {
                out.push(if self.bits[i * n + j] { 0 } else { 255 });
            }
        }
        out
    }
}

fn validate_epsilon(epsilon: f64) -> Result<()> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "recurrence threshold must be positive and finite, got {epsilon}"
        )));
    }
    Ok(())
}

/// Recurrence matrix of arbitrary state rows given as one row-major slice.
///
/// This is the entry point for states that are not delay reconstructions,
/// e.g. the three measured coordinates of the Lorenz system.
pub fn recurrence_matrix_from_rows(
    rows: &[f64],
    dim: usize,
    epsilon: f64,
    norm: Norm,
) -> Result<RecurrenceMatrix> {
    recurrence_matrix_from_rows_with_mode(rows, dim, epsilon, norm, ExecMode::default())
}

pub fn recurrence_matrix_from_rows_with_mode(
    rows: &[f64],
    dim: usize,
    epsilon: f64,
    norm: Norm,
    mode: ExecMode,
) -> Result<RecurrenceMatrix> {
    validate_epsilon(epsilon)?;
    if dim == 0 || rows.len() % dim != 0 {
        return Err(Error::InvalidParameter(format!(
            "row data of length {} is not a multiple of the state dimension {dim}",
            rows.len()
        )));
    }
    let n = rows.len() / dim;
    if n < 2 {
        return Err(Error::SeriesTooShort {
            required: 2,
            actual: n,
        });
    }
    if let Some(flat) = rows.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteEntry {
            row: flat / dim,
            col: flat % dim,
        });
    }
    let mut bits = vec![false; n * n];
    exec::for_each_chunk(mode, &mut bits, n, |i, row_bits| {
        let a = &rows[i * dim..(i + 1) * dim];
        for (j, slot) in row_bits.iter_mut().enumerate() {
            let b = &rows[j * dim..(j + 1) * dim];
            *slot = state_distance(a, b, norm) <= epsilon;
        }
    });
    Ok(RecurrenceMatrix {
        size: n,
        bits,
        epsilon,
        norm,
    })
}

/// Recurrence matrix of a delay embedding.
pub fn recurrence_matrix(
    emb: &DelayEmbedding,
    epsilon: f64,
    norm: Norm,
) -> Result<RecurrenceMatrix> {
    recurrence_matrix_from_rows(emb.as_slice(), emb.dim(), epsilon, norm)
}

/// Fraction of recurrent cells off the line of identity: the number of true
/// off-diagonal bits over N²−N.
pub fn rec_rate(matrix: &RecurrenceMatrix) -> f64 {
    let n = matrix.size() as u64;
    matrix.off_identity_count() as f64 / (n * n - n) as f64
}

/// Histogram of the maximal diagonal line lengths off the line of identity.
///
/// Both triangles contribute, so by symmetry every line is counted twice;
/// the doubling cancels wherever the histogram is normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalHistogram {
    counts: BTreeMap<usize, u64>,
    d_min: usize,
}

impl DiagonalHistogram {
    /// Count of maximal diagonal runs per length, all lengths ≥ 1.
    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    pub fn d_min(&self) -> usize {
        self.d_min
    }

    /// Total recurrence points on lines of length ≥ d_min: Σ l·H(l).
    pub fn points_on_lines(&self) -> u64 {
        self.counts
            .iter()
            .filter(|(l, _)| **l >= self.d_min)
            .map(|(l, c)| *l as u64 * c)
            .sum()
    }

    /// Number of lines of length ≥ d_min.
    pub fn lines_at_least_d_min(&self) -> u64 {
        self.counts
            .iter()
            .filter(|(l, _)| **l >= self.d_min)
            .map(|(_, c)| *c)
            .sum()
    }
}

/// Scan every diagonal off the line of identity for maximal runs of
/// recurrent cells. Runs touching the matrix border count as bracketed by
/// virtual empty cells.
pub fn diagonal_histogram(matrix: &RecurrenceMatrix, d_min: usize) -> Result<DiagonalHistogram> {
    if d_min == 0 {
        return Err(Error::InvalidParameter("d_min must be at least 1".into()));
    }
    let n = matrix.size();
    let mut counts = BTreeMap::new();
    for offset in 1..n {
        let mut run = 0usize;
        for i in 0..n - offset {
            if matrix.bit(i, i + offset) {
                run += 1;
            } else if run > 0 {
                *counts.entry(run).or_insert(0u64) += 2;
                run = 0;
            }
        }
        if run > 0 {
            *counts.entry(run).or_insert(0u64) += 2;
        }
    }
    Ok(DiagonalHistogram { counts, d_min })
}

/// Fraction of off-identity recurrence points that lie on diagonal lines of
/// length ≥ d_min. Zero (by convention) when the plot is empty.
pub fn det_rate(matrix: &RecurrenceMatrix, hist: &DiagonalHistogram) -> f64 {
    let denominator = matrix.off_identity_count();
    if denominator == 0 {
        return 0.0;
    }
    hist.points_on_lines() as f64 / denominator as f64
}

/// Shannon entropy (natural log) of the diagonal line-length distribution
/// restricted to lengths ≥ d_min; zero when at most one length class occurs.
pub fn entropy(hist: &DiagonalHistogram) -> f64 {
    let total = hist.lines_at_least_d_min();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    let mut acc = 0.0;
    for (l, c) in hist.counts() {
        if *l < hist.d_min() || *c == 0 {
            continue;
        }
        let p = *c as f64 / total;
        acc -= p * p.ln();
    }
    acc
}

/// The four recurrence metrics plus the diagonal histogram they derive
/// from. RATIO is undefined (None) when REC is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct RqaMetrics {
    pub rec: f64,
    pub det: f64,
    pub ratio: Option<f64>,
    pub ent: f64,
    pub histogram: DiagonalHistogram,
}

impl RqaMetrics {
    /// False when no diagonal line reached d_min, in which case DET and ENT
    /// are zero by convention.
    pub fn has_lines(&self) -> bool {
        self.histogram.lines_at_least_d_min() > 0
    }
}

/// DET/REC, an error when REC is zero.
pub fn ratio(metrics: &RqaMetrics) -> Result<f64> {
    if metrics.rec == 0.0 {
        return Err(Error::RatioUndefined);
    }
    Ok(metrics.det / metrics.rec)
}

/// All metrics of one recurrence matrix.
pub fn metrics_from_matrix(matrix: &RecurrenceMatrix, d_min: usize) -> Result<RqaMetrics> {
    let histogram = diagonal_histogram(matrix, d_min)?;
    let rec = rec_rate(matrix);
    let det = det_rate(matrix, &histogram);
    let ent = entropy(&histogram);
    let ratio = if rec > 0.0 { Some(det / rec) } else { None };
    Ok(RqaMetrics {
        rec,
        det,
        ratio,
        ent,
        histogram,
    })
}

/// Embed, threshold and quantify in one call — the single entry point used
/// by the command-line tools.
pub fn rqa_all(
    x: &TimeSeries,
    params: EmbeddingParams,
    epsilon: f64,
    norm: Norm,
    d_min: usize,
) -> Result<RqaMetrics> {
    let emb = utde_embed(x, params)?;
    if emb.n_rows() < 2 {
        return Err(Error::SeriesTooShort {
            required: (params.dimension_m - 1) * params.delay_tau + 2,
            actual: x.len(),
        });
    }
    let matrix = recurrence_matrix(&emb, epsilon, norm)?;
    metrics_from_matrix(&matrix, d_min)
}

/// RQA metrics over a cartesian (m, τ, ε) grid. Cells whose (m, τ) pair
/// needs more samples than the series provides are None, never fabricated.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    m_values: Vec<usize>,
    tau_values: Vec<usize>,
    eps_values: Vec<f64>,
    cells: Vec<Option<RqaMetrics>>,
}

impl SweepGrid {
    pub fn m_values(&self) -> &[usize] {
        &self.m_values
    }

    pub fn tau_values(&self) -> &[usize] {
        &self.tau_values
    }

    pub fn eps_values(&self) -> &[f64] {
        &self.eps_values
    }

    pub fn cell(&self, mi: usize, ti: usize, ei: usize) -> Option<&RqaMetrics> {
        self.cells[(mi * self.tau_values.len() + ti) * self.eps_values.len() + ei].as_ref()
    }

    pub fn is_fully_feasible(&self) -> bool {
        self.cells.iter().all(|c| c.is_some())
    }

    /// Long-format CSV: one `m,tau,eps,rec,det,ratio,ent` row per cell, in
    /// (m, τ, ε) nesting order. Infeasible cells keep their coordinates and
    /// leave all metric fields empty; an undefined RATIO leaves only the
    /// ratio field empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,tau,eps,rec,det,ratio,ent\n");
        for (mi, m) in self.m_values.iter().enumerate() {
            for (ti, tau) in self.tau_values.iter().enumerate() {
                for (ei, eps) in self.eps_values.iter().enumerate() {
                    match self.cell(mi, ti, ei) {
                        Some(metrics) => {
                            let ratio = metrics.ratio.map(|r| r.to_string()).unwrap_or_default();
                            let _ = writeln!(
                                out,
                                "{m},{tau},{eps},{},{},{ratio},{}",
                                metrics.rec, metrics.det, metrics.ent
                            );
                        }
                        None => {
                            let _ = writeln!(out, "{m},{tau},{eps},,,,");
                        }
                    }
                }
            }
        }
        out
    }
}

/// The ε grid of 29 thresholds 0.2, 0.3, …, 3.0 used by the sensitivity
/// sweeps.
pub fn default_eps_values() -> Vec<f64> {
    (2..=30).map(|tenths| tenths as f64 / 10.0).collect()
}

/// Sweep the metric surface over every (m, τ, ε) combination. Cells of one
/// (m, τ) pair share a single distance computation; grids are identical
/// under any execution order.
pub fn sweep(
    x: &TimeSeries,
    m_values: &[usize],
    tau_values: &[usize],
    eps_values: &[f64],
    norm: Norm,
    d_min: usize,
) -> Result<SweepGrid> {
    sweep_with_mode(
        x,
        m_values,
        tau_values,
        eps_values,
        norm,
        d_min,
        ExecMode::default(),
    )
}

pub fn sweep_with_mode(
    x: &TimeSeries,
    m_values: &[usize],
    tau_values: &[usize],
    eps_values: &[f64],
    norm: Norm,
    d_min: usize,
    mode: ExecMode,
) -> Result<SweepGrid> {
    if m_values.is_empty() || tau_values.is_empty() || eps_values.is_empty() {
        return Err(Error::InvalidParameter(
            "sweep ranges must be non-empty".into(),
        ));
    }
    for &m in m_values {
        if m == 0 {
            return Err(Error::InvalidParameter("m values must be ≥ 1".into()));
        }
    }
    for &tau in tau_values {
        if tau == 0 {
            return Err(Error::InvalidParameter("tau values must be ≥ 1".into()));
        }
    }
    for &eps in eps_values {
        validate_epsilon(eps)?;
    }
    if d_min == 0 {
        return Err(Error::InvalidParameter("d_min must be at least 1".into()));
    }

    let pairs: Vec<(usize, usize)> = m_values
        .iter()
        .flat_map(|&m| tau_values.iter().map(move |&tau| (m, tau)))
        .collect();

    let per_pair: Vec<Vec<Option<RqaMetrics>>> = exec::map_indexed(mode, pairs.len(), |k| {
        let (m, tau) = pairs[k];
        let feasible = x.len() >= (m - 1) * tau + 2;
        if !feasible {
            return vec![None; eps_values.len()];
        }
        let params = EmbeddingParams::new(m, tau).expect("validated above");
        let emb = utde_embed(x, params).expect("length checked");
        let n = emb.n_rows();
        let dim = emb.dim();
        let rows = emb.as_slice();
        let mut dist = vec![0.0f64; n * n];
        for i in 0..n {
            let a = &rows[i * dim..(i + 1) * dim];
            for j in 0..n {
                let b = &rows[j * dim..(j + 1) * dim];
                dist[i * n + j] = state_distance(a, b, norm);
            }
        }
        eps_values
            .iter()
            .map(|&eps| {
                let bits: Vec<bool> = dist.iter().map(|&d| d <= eps).collect();
                let matrix = RecurrenceMatrix {
                    size: n,
                    bits,
                    epsilon: eps,
                    norm,
                };
                Some(metrics_from_matrix(&matrix, d_min).expect("d_min validated"))
            })
            .collect()
    });

    let eps_len = eps_values.len();
    let mut cells = Vec::with_capacity(pairs.len() * eps_len);
    for row in per_pair {
        cells.extend(row);
    }
    Ok(SweepGrid {
        m_values: m_values.to_vec(),
        tau_values: tau_values.to_vec(),
        eps_values: eps_values.to_vec(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(samples: Vec<f64>) -> TimeSeries {
        TimeSeries::new(samples, 1.0, "test").unwrap()
    }

    #[test]
    fn identical_rows_are_fully_recurrent() {
        let m = recurrence_matrix_from_rows(&[2.0, 2.0], 1, 0.5, Norm::Euclidean).unwrap();
        assert_eq!(m.size(), 2);
        for i in 0..2 {
            for j in 0..2 {
                assert!(m.bit(i, j));
            }
        }
        assert_eq!(rec_rate(&m), 1.0);
    }

    #[test]
    fn distant_rows_leave_only_the_identity() {
        let m = recurrence_matrix_from_rows(&[0.0, 10.0], 1, 1.0, Norm::Euclidean).unwrap();
        assert!(m.bit(0, 0) && m.bit(1, 1));
        assert!(!m.bit(0, 1) && !m.bit(1, 0));
        assert_eq!(rec_rate(&m), 0.0);
    }

    #[test]
    fn threshold_boundary_is_inclusive() {
        let m = recurrence_matrix_from_rows(&[0.0, 1.0], 1, 1.0, Norm::Euclidean).unwrap();
        assert!(m.bit(0, 1));
    }

    #[test]
    fn non_finite_states_are_rejected() {
        let err = recurrence_matrix_from_rows(&[0.0, f64::NAN, 1.0, 2.0], 2, 1.0, Norm::Euclidean)
            .unwrap_err();
        assert_eq!(err, Error::NonFiniteEntry { row: 0, col: 1 });
    }

    /// 5×5 matrix with one maximal diagonal run of length 3 in the upper
    /// triangle (mirrored below).
    fn run_of_three() -> RecurrenceMatrix {
        let n = 5;
        let mut bits = vec![false; n * n];
        for i in 0..n {
            bits[i * n + i] = true;
        }
        for i in 0..3 {
            bits[i * n + (i + 2)] = true;
            bits[(i + 2) * n + i] = true;
        }
        RecurrenceMatrix::from_bits(bits, n, 1.0, Norm::Euclidean).unwrap()
    }

    #[test]
    fn single_run_is_counted_twice_by_symmetry() {
        let hist = diagonal_histogram(&run_of_three(), 2).unwrap();
        assert_eq!(hist.counts().len(), 1);
        assert_eq!(hist.counts()[&3], 2);
    }

    #[test]
    fn empty_off_identity_has_empty_histogram() {
        let n = 4;
        let mut bits = vec![false; n * n];
        for i in 0..n {
            bits[i * n + i] = true;
        }
        let m = RecurrenceMatrix::from_bits(bits, n, 1.0, Norm::Euclidean).unwrap();
        let hist = diagonal_histogram(&m, 2).unwrap();
        assert!(hist.counts().is_empty());
        let metrics = metrics_from_matrix(&m, 2).unwrap();
        assert_eq!(metrics.rec, 0.0);
        assert_eq!(metrics.det, 0.0);
        assert_eq!(metrics.ent, 0.0);
        assert_eq!(metrics.ratio, None);
        assert!(!metrics.has_lines());
        assert_eq!(ratio(&metrics), Err(Error::RatioUndefined));
    }

    #[test]
    fn entropy_conventions() {
        let hist = DiagonalHistogram {
            counts: BTreeMap::from([(4, 7)]),
            d_min: 2,
        };
        assert_eq!(entropy(&hist), 0.0);

        let hist = DiagonalHistogram {
            counts: BTreeMap::from([(2, 5), (4, 5)]),
            d_min: 2,
        };
        assert!((entropy(&hist) - 2.0f64.ln()).abs() < 1e-12);

        // Lengths below d_min do not participate.
        let hist = DiagonalHistogram {
            counts: BTreeMap::from([(1, 100), (4, 7)]),
            d_min: 2,
        };
        assert_eq!(entropy(&hist), 0.0);
    }

    #[test]
    fn det_counts_only_lines_of_at_least_d_min() {
        let m = run_of_three();
        let hist = diagonal_histogram(&m, 2).unwrap();
        // 6 off-identity points, all on the two mirrored length-3 runs.
        assert_eq!(m.off_identity_count(), 6);
        assert_eq!(det_rate(&m, &hist), 1.0);

        let hist4 = diagonal_histogram(&m, 4).unwrap();
        assert_eq!(det_rate(&m, &hist4), 0.0);
    }

    #[test]
    fn rqa_all_matches_staged_composition() {
        let x = crate::signals::gen_gaussian_noise(5, 300).unwrap();
        let params = EmbeddingParams::new(3, 2).unwrap();
        let all = rqa_all(&x, params, 1.5, Norm::Euclidean, 2).unwrap();

        let emb = utde_embed(&x, params).unwrap();
        let matrix = recurrence_matrix(&emb, 1.5, Norm::Euclidean).unwrap();
        let staged = metrics_from_matrix(&matrix, 2).unwrap();
        assert_eq!(all, staged);
    }

    #[test]
    fn rqa_all_rejects_short_series() {
        let x = series(vec![1.0, 2.0, 3.0]);
        let params = EmbeddingParams::new(5, 3).unwrap();
        assert!(matches!(
            rqa_all(&x, params, 1.0, Norm::Euclidean, 2),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn rec_grows_with_epsilon() {
        let x = crate::signals::gen_gaussian_noise(8, 200).unwrap();
        let params = EmbeddingParams::new(6, 8).unwrap();
        let small = rqa_all(&x, params, 1.0, Norm::Euclidean, 2).unwrap();
        let large = rqa_all(&x, params, 3.0, Norm::Euclidean, 2).unwrap();
        assert!(small.rec < large.rec);
    }

    #[test]
    fn single_cell_sweep_equals_rqa_all() {
        let x = crate::signals::gen_harmonic(160).unwrap();
        let grid = sweep(&x, &[4], &[6], &[0.8], Norm::Euclidean, 2).unwrap();
        let direct = rqa_all(
            &x,
            EmbeddingParams::new(4, 6).unwrap(),
            0.8,
            Norm::Euclidean,
            2,
        )
        .unwrap();
        assert_eq!(grid.cell(0, 0, 0), Some(&direct));
    }

    #[test]
    fn sweep_marks_infeasible_cells() {
        let x = series((0..30).map(|i| (i as f64 * 0.7).sin()).collect());
        let grid = sweep(&x, &[2, 16], &[2], &[0.5], Norm::Euclidean, 2).unwrap();
        assert!(grid.cell(0, 0, 0).is_some());
        // m = 16, τ = 2 needs 32 samples.
        assert!(grid.cell(1, 0, 0).is_none());
        assert!(!grid.is_fully_feasible());
        let csv = grid.to_csv();
        assert!(csv.contains("16,2,0.5,,,,\n"));
    }

    #[test]
    fn sweep_modes_agree_bit_for_bit() {
        let x = crate::signals::gen_gaussian_noise(21, 150).unwrap();
        let eps = [0.5, 1.0, 2.0];
        let seq = sweep_with_mode(
            &x,
            &[2, 4],
            &[1, 3],
            &eps,
            Norm::Euclidean,
            2,
            ExecMode::Sequential,
        )
        .unwrap();
        let par = sweep_with_mode(
            &x,
            &[2, 4],
            &[1, 3],
            &eps,
            Norm::Euclidean,
            2,
            ExecMode::Parallel,
        )
        .unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq.to_csv(), par.to_csv());
    }

    #[test]
    fn default_eps_grid_has_29_exact_tenths() {
        let eps = default_eps_values();
        assert_eq!(eps.len(), 29);
        assert_eq!(eps[0], 0.2);
        assert_eq!(eps[28], 3.0);
    }

    #[test]
    fn pgm_puts_row_zero_at_the_bottom() {
        let m = recurrence_matrix_from_rows(&[0.0, 10.0], 1, 1.0, Norm::Euclidean).unwrap();
        let bytes = m.to_pgm_bytes();
        let header = b"P5\n2 2\n255\n";
        assert_eq!(&bytes[..header.len()], header);
        // Image top = matrix row 1: (false, true); bottom = row 0: (true, false).
        assert_eq!(&bytes[header.len()..], &[255, 0, 0, 255]);
    }

    #[test]
    fn from_bits_validates_symmetry_and_identity() {
        let mut bits = vec![false; 9];
        for i in 0..3 {
            bits[i * 3 + i] = true;
        }
        bits[1] = true; // (0,1) without (1,0)
        assert!(RecurrenceMatrix::from_bits(bits, 3, 1.0, Norm::Euclidean).is_err());

        let mut bits = vec![false; 9];
        bits[0] = true;
        bits[4] = true; // (2,2) missing
        assert!(RecurrenceMatrix::from_bits(bits, 3, 1.0, Norm::Euclidean).is_err());
    }
}
