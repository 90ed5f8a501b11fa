//! Principal-component projection of an embedding to three coordinates,
//! used to export reconstructed state-space trajectories for plotting.

use crate::embedding::DelayEmbedding;
use crate::{Error, Result};

/// A 3-D trajectory plus the covariance eigenvalues of the kept components.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory3 {
    /// One (c1, c2, c3) point per embedding row.
    pub points: Vec<[f64; 3]>,
    /// Top-3 covariance eigenvalues, nonincreasing.
    pub explained_variance: [f64; 3],
    /// True when fewer than three components carried nonzero variance; the
    /// missing components are zero.
    pub rank_deficient: bool,
}

/// Project a delay embedding onto its top three principal components.
///
/// Columns are mean-centered, the sample covariance (N−1 denominator) is
/// diagonalized, and each component's sign is fixed by making its
/// largest-magnitude loading positive so repeated runs are identical.
pub fn pca_project(emb: &DelayEmbedding) -> Result<Trajectory3> {
    pca_project_rows(emb.as_slice(), emb.dim())
}

/// Same as [`pca_project`] for an arbitrary row-major state matrix.
pub fn pca_project_rows(rows: &[f64], dim: usize) -> Result<Trajectory3> {
    const K: usize = 3;
    if dim < K {
        return Err(Error::InvalidParameter(format!(
            "projection needs at least {K} columns, got {dim}"
        )));
    }
    if dim == 0 || rows.len() % dim != 0 {
        return Err(Error::InvalidParameter(
            "row data does not match the declared dimension".into(),
        ));
    }
    let n = rows.len() / dim;
    if n < K {
        return Err(Error::SeriesTooShort {
            required: K,
            actual: n,
        });
    }

    let mut means = vec![0.0; dim];
    for r in 0..n {
        for c in 0..dim {
            means[c] += rows[r * dim + c];
        }
    }
    for m in &mut means {
        *m /= n as f64;
    }
    let centered: Vec<f64> = (0..n * dim).map(|k| rows[k] - means[k % dim]).collect();

    // Sample covariance of the centered columns.
    let mut cov = vec![0.0; dim * dim];
    for r in 0..n {
        let row = &centered[r * dim..(r + 1) * dim];
        for i in 0..dim {
            for j in i..dim {
                cov[i * dim + j] += row[i] * row[j];
            }
        }
    }
    let denom = (n - 1) as f64;
    for i in 0..dim {
        for j in i..dim {
            let v = cov[i * dim + j] / denom;
            cov[i * dim + j] = v;
            cov[j * dim + i] = v;
        }
    }

    let (mut eigenvalues, vectors) = jacobi_eigen(cov, dim);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eigenvalues[b].total_cmp(&eigenvalues[a]));
    for v in &mut eigenvalues {
        if *v < 0.0 {
            *v = 0.0; // round-off below zero
        }
    }

    let tol = eigenvalues[order[0]] * 1e-12;
    let mut axes: Vec<Vec<f64>> = Vec::with_capacity(K);
    let mut explained = [0.0; K];
    let mut rank_deficient = false;
    for k in 0..K {
        let idx = order[k];
        let lambda = eigenvalues[idx];
        if lambda <= tol {
            rank_deficient = true;
            axes.push(vec![0.0; dim]);
            explained[k] = 0.0;
            continue;
        }
        let mut axis: Vec<f64> = (0..dim).map(|r| vectors[r * dim + idx]).collect();
        let lead = axis
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.abs().total_cmp(&b.abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        if axis[lead] < 0.0 {
            for v in &mut axis {
                *v = -*v;
            }
        }
        axes.push(axis);
        explained[k] = lambda;
    }

    let points = (0..n)
        .map(|r| {
            let row = &centered[r * dim..(r + 1) * dim];
            [dot(row, &axes[0]), dot(row, &axes[1]), dot(row, &axes[2])]
        })
        .collect();

    Ok(Trajectory3 {
        points,
        explained_variance: explained,
        rank_deficient,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Cyclic Jacobi diagonalization of a symmetric matrix; returns the
/// eigenvalues and a column-major set of eigenvectors. Plenty for the small
/// covariance matrices produced here.
fn jacobi_eigen(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() < 1e-14 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let eigenvalues = (0..n).map(|i| a[i * n + i]).collect();
    (eigenvalues, v)
}
