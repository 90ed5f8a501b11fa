//! Postprocessing stages applied to raw recordings before embedding:
//! window extraction, zero-mean/unit-variance (zmuv) normalization and
//! Savitzky-Golay smoothing.
//!
//! The pipeline order is fixed: normalize first, then smooth. The three
//! smoothness levels are [`SmoothnessLevel::Sg0`] (zmuv only),
//! [`SmoothnessLevel::Sg1`] (zmuv + SG with window 29) and
//! [`SmoothnessLevel::Sg2`] (zmuv + SG with window 159), all at polynomial
//! order 5.

use crate::{Error, Result, TimeSeries};

/// Polynomial order shared by the sg1/sg2 smoothing levels.
pub const SG_POLY_ORDER: usize = 5;
/// Filter length of the sg1 level.
pub const SG1_WINDOW: usize = 29;
/// Filter length of the sg2 level.
pub const SG2_WINDOW: usize = 159;

/// Savitzky-Golay filter settings: fit a polynomial of `poly_order` over an
/// odd `window_length` by least squares and read off the
/// `derivative_order`-th derivative at the window center.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmoothingSpec {
    poly_order: usize,
    window_length: usize,
    derivative_order: usize,
}

impl SmoothingSpec {
    pub fn new(poly_order: usize, window_length: usize, derivative_order: usize) -> Result<Self> {
        if poly_order == 0 {
            return Err(Error::InvalidParameter(
                "polynomial order must be positive".into(),
            ));
        }
        if window_length % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "window length must be odd, got {window_length}"
            )));
        }
        if window_length <= poly_order {
            return Err(Error::InvalidParameter(format!(
                "window length {window_length} must exceed polynomial order {poly_order}"
            )));
        }
        if derivative_order > poly_order {
            return Err(Error::InvalidParameter(format!(
                "derivative order {derivative_order} exceeds polynomial order {poly_order}"
            )));
        }
        Ok(Self {
            poly_order,
            window_length,
            derivative_order,
        })
    }

    pub fn poly_order(&self) -> usize {
        self.poly_order
    }

    pub fn window_length(&self) -> usize {
        self.window_length
    }

    pub fn derivative_order(&self) -> usize {
        self.derivative_order
    }
}

/// Contiguous sub-series selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    pub length_samples: usize,
    pub offset_samples: usize,
}

impl WindowSpec {
    pub fn new(length_samples: usize, offset_samples: usize) -> Result<Self> {
        if length_samples == 0 {
            return Err(Error::InvalidParameter(
                "window length must be positive".into(),
            ));
        }
        Ok(Self {
            length_samples,
            offset_samples,
        })
    }
}

/// The three smoothness levels applied to normalized data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothnessLevel {
    /// zmuv normalization only.
    Sg0,
    /// zmuv, then Savitzky-Golay with p=5, window 29.
    Sg1,
    /// zmuv, then Savitzky-Golay with p=5, window 159.
    Sg2,
}

impl SmoothnessLevel {
    /// The smoothing filter of this level, if any.
    pub fn spec(&self) -> Option<SmoothingSpec> {
        let window = match self {
            SmoothnessLevel::Sg0 => return None,
            SmoothnessLevel::Sg1 => SG1_WINDOW,
            SmoothnessLevel::Sg2 => SG2_WINDOW,
        };
        Some(SmoothingSpec::new(SG_POLY_ORDER, window, 0).expect("built-in spec is valid"))
    }

    /// Normalize, then smooth according to the level.
    pub fn apply(&self, x: &TimeSeries) -> Result<TimeSeries> {
        let normalized = zmuv_normalize(x)?;
        match self.spec() {
            None => Ok(normalized),
            Some(spec) => sg_smooth(&normalized, &spec),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SmoothnessLevel::Sg0 => "sg0",
            SmoothnessLevel::Sg1 => "sg1",
            SmoothnessLevel::Sg2 => "sg2",
        }
    }
}

impl std::str::FromStr for SmoothnessLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sg0" => Ok(SmoothnessLevel::Sg0),
            "sg1" => Ok(SmoothnessLevel::Sg1),
            "sg2" => Ok(SmoothnessLevel::Sg2),
            other => Err(Error::InvalidParameter(format!(
                "unknown smoothness level {other:?}, expected sg0|sg1|sg2"
            ))),
        }
    }
}

/// Rescale to zero sample mean and unit sample standard deviation
/// (N−1 denominator).
pub fn zmuv_normalize(x: &TimeSeries) -> Result<TimeSeries> {
    let samples = x.samples();
    if samples.len() < 2 {
        return Err(Error::SeriesTooShort {
            required: 2,
            actual: samples.len(),
        });
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let std = var.sqrt();
    if std == 0.0 {
        return Err(Error::DegenerateVariance);
    }
    x.with_samples(samples.iter().map(|v| (v - mean) / std).collect())
}

/// Savitzky-Golay convolution coefficients for the window center.
///
/// For derivative order 0 the coefficients are symmetric and sum to 1.
pub fn sg_coefficients(spec: &SmoothingSpec) -> Vec<f64> {
    let n = spec.window_length;
    let p = spec.poly_order;
    let d = spec.derivative_order;
    let half = (n - 1) / 2;
    let scale = half.max(1) as f64;

    // Gram matrix of the scaled monomial basis u^j, u = (k - half)/half.
    let mut gram = vec![vec![0.0; p + 1]; p + 1];
    let powers: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let u = (k as f64 - half as f64) / scale;
            let mut row = Vec::with_capacity(p + 1);
            let mut acc = 1.0;
            for _ in 0..=p {
                row.push(acc);
                acc *= u;
            }
            row
        })
        .collect();
    for row in &powers {
        for i in 0..=p {
            for j in 0..=p {
                gram[i][j] += row[i] * row[j];
            }
        }
    }

    // Solve G w = e_d; then c_k = d!/scale^d · Σ_j w_j u_k^j.
    let mut rhs = vec![0.0; p + 1];
    rhs[d] = 1.0;
    let w = solve_linear(gram, rhs);
    let factorial: f64 = (1..=d).map(|v| v as f64).product();
    let rescale = factorial / scale.powi(d as i32);
    powers
        .iter()
        .map(|row| rescale * row.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>())
        .collect()
}

/// Smooth a series with the given filter. Interior points are the
/// convolution with [`sg_coefficients`]; the first and last half-windows are
/// filled by evaluating the least-squares polynomial of the first/last full
/// window at the boundary positions, so the output has the input's length.
pub fn sg_smooth(x: &TimeSeries, spec: &SmoothingSpec) -> Result<TimeSeries> {
    let samples = x.samples();
    let n = spec.window_length;
    if samples.len() < n {
        return Err(Error::SeriesTooShort {
            required: n,
            actual: samples.len(),
        });
    }
    let half = (n - 1) / 2;
    let len = samples.len();
    let coeffs = sg_coefficients(spec);
    let mut out = vec![0.0; len];

    for i in half..len - half {
        let window = &samples[i - half..i + half + 1];
        out[i] = window.iter().zip(&coeffs).map(|(a, b)| a * b).sum();
    }

    let head = fit_window_poly(&samples[..n], spec);
    for (i, slot) in out.iter_mut().take(half).enumerate() {
        *slot = eval_fit(&head, spec, i as f64 - half as f64);
    }
    let tail = fit_window_poly(&samples[len - n..], spec);
    for (i, slot) in out.iter_mut().enumerate().skip(len - half) {
        let offset = i as f64 - (len - 1 - half) as f64;
        *slot = eval_fit(&tail, spec, offset);
    }

    x.with_samples(out)
}

/// Least-squares polynomial coefficients (in the scaled variable u) of one
/// full window of data.
fn fit_window_poly(window: &[f64], spec: &SmoothingSpec) -> Vec<f64> {
    let n = spec.window_length;
    let p = spec.poly_order;
    let half = (n - 1) / 2;
    let scale = half.max(1) as f64;
    let mut gram = vec![vec![0.0; p + 1]; p + 1];
    let mut rhs = vec![0.0; p + 1];
    for (k, &y) in window.iter().enumerate() {
        let u = (k as f64 - half as f64) / scale;
        let mut pow = 1.0;
        let mut row = Vec::with_capacity(p + 1);
        for _ in 0..=p {
            row.push(pow);
            pow *= u;
        }
        for i in 0..=p {
            rhs[i] += row[i] * y;
            for j in 0..=p {
                gram[i][j] += row[i] * row[j];
            }
        }
    }
    solve_linear(gram, rhs)
}

/// Evaluate the `derivative_order`-th derivative of a fitted window
/// polynomial at a signed sample offset from the window center.
fn eval_fit(poly: &[f64], spec: &SmoothingSpec, offset: f64) -> f64 {
    let half = (spec.window_length - 1) / 2;
    let scale = half.max(1) as f64;
    let d = spec.derivative_order;
    let u = offset / scale;
    let mut acc = 0.0;
    for (j, &b) in poly.iter().enumerate().skip(d) {
        // d-th derivative of u^j: j!/(j-d)! · u^(j-d)
        let fall: f64 = ((j - d + 1)..=j).map(|v| v as f64).product();
        acc += b * fall * u.powi((j - d) as i32);
    }
    acc / scale.powi(d as i32)
}

/// Gaussian elimination with partial pivoting on a small dense system.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty column");
        a.swap(col, pivot);
        b.swap(col, pivot);
        let diag = a[col][col];
        debug_assert!(diag != 0.0, "singular normal equations");
        for row in col + 1..n {
            let factor = a[row][col] / diag;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    x
}

/// Contiguous sub-series; the sample rate is preserved.
pub fn window_slice(x: &TimeSeries, w: &WindowSpec) -> Result<TimeSeries> {
    let len = x.len();
    let end = w.offset_samples.checked_add(w.length_samples);
    match end {
        Some(end) if end <= len => x.with_samples(
            x.samples()[w.offset_samples..w.offset_samples + w.length_samples].to_vec(),
        ),
        _ => Err(Error::WindowOutOfBounds {
            offset: w.offset_samples,
            length: w.length_samples,
            len,
        }),
    }
}
