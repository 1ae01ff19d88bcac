//! Householder QR least-squares solver.

use super::matrix::MatrixBuffer;
use crate::error::{Error, Result};

/// Relative pivot threshold: a column whose remaining mass falls below
/// RANK_GATE times its original norm is treated as numerically dependent.
pub const RANK_GATE: f64 = 1e-10;

/// Solves min_x |A x - b|_2 for a tall matrix A (rows >= cols) by Householder
/// reflections. Returns the coefficient vector; fails with `RankDeficient`
/// naming the offending column when a pivot collapses.
pub fn least_squares(a: &MatrixBuffer, b: &[f64]) -> Result<Vec<f64>> {
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "rhs length {} does not match {m} rows",
            b.len()
        )));
    }
    if m < n {
        return Err(Error::invalid(format!(
            "least squares needs rows >= cols, got {m} x {n}"
        )));
    }
    // working copies: R accumulates in `w`, Q' b accumulates in `rhs`
    let mut w: Vec<f64> = a.data().to_vec();
    let mut rhs: Vec<f64> = b.to_vec();
    let col_norms: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| w[i * n + j] * w[i * n + j]).sum::<f64>().sqrt())
        .collect();

    let mut v = vec![0.0; m];
    for j in 0..n {
        // Householder vector for column j below the diagonal
        let mut norm_sq = 0.0;
        for i in j..m {
            let x = w[i * n + j];
            v[i] = x;
            norm_sq += x * x;
        }
        let norm = norm_sq.sqrt();
        let gate = if col_norms[j] > 0.0 {
            RANK_GATE * col_norms[j]
        } else {
            RANK_GATE
        };
        if norm <= gate {
            return Err(Error::RankDeficient {
                column: j,
                pivot: norm,
            });
        }
        let alpha = if v[j] >= 0.0 { -norm } else { norm };
        v[j] -= alpha;
        let v_norm_sq: f64 = (j..m).map(|i| v[i] * v[i]).sum();
        if v_norm_sq > 0.0 {
            let beta = 2.0 / v_norm_sq;
            // reflect the remaining columns
            for c in j..n {
                let dot: f64 = (j..m).map(|i| v[i] * w[i * n + c]).sum();
                let f = beta * dot;
                for i in j..m {
                    w[i * n + c] -= f * v[i];
                }
            }
            // and the right-hand side
            let dot: f64 = (j..m).map(|i| v[i] * rhs[i]).sum();
            let f = beta * dot;
            for i in j..m {
                rhs[i] -= f * v[i];
            }
        }
        w[j * n + j] = alpha;
        for i in j + 1..m {
            w[i * n + j] = 0.0;
        }
    }
    // back substitution on the upper-triangular system
    let mut x = vec![0.0; n];
    for j in (0..n).rev() {
        let mut acc = rhs[j];
        for c in j + 1..n {
            acc -= w[j * n + c] * x[c];
        }
        let diag = w[j * n + j];
        if diag.abs() <= RANK_GATE * col_norms[j].max(1e-300) {
            return Err(Error::RankDeficient {
                column: j,
                pivot: diag.abs(),
            });
        }
        x[j] = acc / diag;
    }
    Ok(x)
}
