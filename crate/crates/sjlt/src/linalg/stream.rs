//! Sketched linear algebra: approximate products, streaming regression, and
//! streaming covariance summaries.

use super::matrix::MatrixBuffer;
use super::qr::least_squares;
use crate::error::{Error, Result};
use crate::params::JlParams;
use crate::sketch::{sample_block, SparseSketch};

/// S applied to every column of a d x n matrix: the k x n matrix S A.
pub fn apply_to_columns(sketch: &SparseSketch, a: &MatrixBuffer) -> Result<MatrixBuffer> {
    if a.rows() != sketch.d() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows but sketch expects d={}",
            a.rows(),
            sketch.d()
        )));
    }
    let mut out = MatrixBuffer::zeros(sketch.k(), a.cols())?;
    // scatter row-wise: row i of A feeds the s sketch rows of column i
    for i in 0..a.rows() {
        let (rows, vals) = sketch.column(i);
        let src = a.row(i);
        for (r, v) in rows.iter().zip(vals) {
            let r = *r as usize;
            for (c, &x) in src.iter().enumerate() {
                if x != 0.0 {
                    out.add_at(r, c, v * x);
                }
            }
        }
    }
    Ok(out)
}

/// Approximate Gram product A' B computed as (S A)' (S B). Unbiased over the
/// sketch draw, with error controlled by the distortion of S on the column
/// space (via the polarization identity).
pub fn approx_matrix_product(
    sketch: &SparseSketch,
    a: &MatrixBuffer,
    b: &MatrixBuffer,
) -> Result<MatrixBuffer> {
    let sa = apply_to_columns(sketch, a)?;
    let sb = apply_to_columns(sketch, b)?;
    sa.transpose_mul(&sb)
}

/// Exact A' B for comparison.
pub fn exact_matrix_product(a: &MatrixBuffer, b: &MatrixBuffer) -> Result<MatrixBuffer> {
    a.transpose_mul(b)
}

/// The pair of (eps, delta) requirements that make a single sketch sound for
/// matrix products over r-dimensional column spaces: a coarse requirement
/// just under the 1/2 validity ceiling held with probability 1 - delta', and
/// the fine requirement sqrt(eps/r) held with probability 1 - delta. Feeding
/// both into parameter derivation sizes one sketch for the whole product.
pub fn product_moment_requirements(
    eps: f64,
    delta: f64,
    r: usize,
    delta_prime: Option<f64>,
) -> Result<Vec<(f64, f64)>> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::invalid("eps must lie in (0, 1/2)"));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::invalid("delta must lie in (0, 1/2)"));
    }
    if r == 0 {
        return Err(Error::invalid("rank parameter r must be >= 1"));
    }
    let coarse_eps = 0.5 - 2f64.powi(-20);
    let fine_eps = (eps / r as f64).sqrt();
    if fine_eps >= 0.5 {
        return Err(Error::invalid(format!(
            "sqrt(eps/r) = {fine_eps} reaches the 1/2 ceiling; raise r or lower eps"
        )));
    }
    let dp = match delta_prime {
        Some(v) => {
            if !(v > 0.0 && v < 0.5) {
                return Err(Error::invalid("delta_prime must lie in (0, 1/2)"));
            }
            v
        }
        // default: delta^r, floored so log2(1/delta') stays manageable
        None => delta.powi(r.min(1 << 20) as i32).max(2f64.powi(-60)),
    };
    Ok(vec![(coarse_eps, dp), (fine_eps, delta)])
}

/// Streaming sketched least squares: maintains S A (k x n) and S b under
/// turnstile updates to individual entries of A and b, then solves the small
/// k x n system. Uses the block construction for S.
#[derive(Debug, Clone)]
pub struct RegressionState {
    sketch: SparseSketch,
    sa: MatrixBuffer,
    sb: Vec<f64>,
}

/// One turnstile update against the regression system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegressionUpdate {
    /// A[row, col] += value.
    Design { row: usize, col: usize, value: f64 },
    /// b[row] += value.
    Rhs { row: usize, value: f64 },
}

pub fn regression_init(params: &JlParams, n: usize) -> Result<RegressionState> {
    if n == 0 {
        return Err(Error::invalid("regression needs at least one column"));
    }
    if params.k < n {
        return Err(Error::invalid(format!(
            "sketch dimension k={} is below the {n} columns; the sketched system \
             would be underdetermined",
            params.k
        )));
    }
    let sketch = sample_block(params)?;
    let sa = MatrixBuffer::zeros(sketch.k(), n)?;
    let sb = vec![0.0; sketch.k()];
    Ok(RegressionState { sketch, sa, sb })
}

impl RegressionState {
    pub fn sketch(&self) -> &SparseSketch {
        &self.sketch
    }

    pub fn sketched_design(&self) -> &MatrixBuffer {
        &self.sa
    }

    pub fn sketched_rhs(&self) -> &[f64] {
        &self.sb
    }

    pub fn n(&self) -> usize {
        self.sa.cols()
    }
}

/// Folds one update into the state, touching exactly the s sketch rows of the
/// addressed input row.
pub fn regression_update(state: &mut RegressionState, update: &RegressionUpdate) -> Result<()> {
    match *update {
        RegressionUpdate::Design { row, col, value } => {
            if row >= state.sketch.d() {
                return Err(Error::invalid(format!(
                    "design row {row} outside source dimension {}",
                    state.sketch.d()
                )));
            }
            if col >= state.sa.cols() {
                return Err(Error::invalid(format!(
                    "design column {col} outside width {}",
                    state.sa.cols()
                )));
            }
            if value == 0.0 {
                return Ok(());
            }
            let (rows, vals) = state.sketch.column(row);
            for (r, v) in rows.iter().zip(vals) {
                state.sa.add_at(*r as usize, col, v * value);
            }
        }
        RegressionUpdate::Rhs { row, value } => {
            if row >= state.sketch.d() {
                return Err(Error::invalid(format!(
                    "rhs row {row} outside source dimension {}",
                    state.sketch.d()
                )));
            }
            if value == 0.0 {
                return Ok(());
            }
            let (rows, vals) = state.sketch.column(row);
            for (r, v) in rows.iter().zip(vals) {
                state.sb[*r as usize] += v * value;
            }
        }
    }
    Ok(())
}

/// Solves the sketched system min_x |S A x - S b| and reports the sketched
/// residual norm alongside the coefficients.
pub fn regression_solve(state: &RegressionState) -> Result<(Vec<f64>, f64)> {
    let x = least_squares(&state.sa, &state.sb)?;
    let fitted = state.sa.mul_vec(&x)?;
    let residual = fitted
        .iter()
        .zip(&state.sb)
        .map(|(f, b)| (f - b) * (f - b))
        .sum::<f64>()
        .sqrt();
    Ok((x, residual))
}

/// Streaming covariance summary over columns: after pushing the n columns of
/// a d x n matrix A, holds S A (k x n) and S A A' (k x d). Both are linear in
/// the stream, so columns can arrive in any order.
#[derive(Debug, Clone)]
pub struct LowRankState {
    sketch: SparseSketch,
    sa: MatrixBuffer,
    saat: MatrixBuffer,
    filled: Vec<bool>,
}

pub fn low_rank_init(params: &JlParams, n: usize) -> Result<LowRankState> {
    if n == 0 {
        return Err(Error::invalid("need at least one column"));
    }
    let sketch = sample_block(params)?;
    let sa = MatrixBuffer::zeros(sketch.k(), n)?;
    let saat = MatrixBuffer::zeros(sketch.k(), sketch.d())?;
    Ok(LowRankState {
        sketch,
        sa,
        saat,
        filled: vec![false; n],
    })
}

impl LowRankState {
    pub fn sketch(&self) -> &SparseSketch {
        &self.sketch
    }

    pub fn sketched_columns(&self) -> &MatrixBuffer {
        &self.sa
    }

    pub fn sketched_covariance(&self) -> &MatrixBuffer {
        &self.saat
    }
}

/// Ingests column j of A: records S c into column j of S A and adds the
/// rank-one term (S c) c' into S A A'. Each column may be pushed once.
pub fn low_rank_push_column(state: &mut LowRankState, j: usize, c: &[f64]) -> Result<()> {
    if j >= state.filled.len() {
        return Err(Error::invalid(format!(
            "column index {j} outside width {}",
            state.filled.len()
        )));
    }
    if state.filled[j] {
        return Err(Error::invalid(format!("column {j} was already pushed")));
    }
    let sc = state.sketch.apply(c)?; // validates the length against d
    for (r, &v) in sc.iter().enumerate() {
        state.sa.set(r, j, v);
        if v != 0.0 {
            for (i, &ci) in c.iter().enumerate() {
                if ci != 0.0 {
                    state.saat.add_at(r, i, v * ci);
                }
            }
        }
    }
    state.filled[j] = true;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(d: usize) -> JlParams {
        JlParams::from_dims(d, 64, 8, 0.3, 0.1, 99).unwrap()
    }

    #[test]
    fn apply_to_columns_matches_per_column_apply() {
        let p = params(6);
        let sk = sample_block(&p).unwrap();
        let a = MatrixBuffer::from_rows(
            (0..6)
                .map(|i| vec![i as f64, 1.0 - i as f64, 0.5 * i as f64])
                .collect(),
        )
        .unwrap();
        let sa = apply_to_columns(&sk, &a).unwrap();
        for c in 0..3 {
            let direct = sk.apply(&a.column(c)).unwrap();
            for r in 0..sk.k() {
                assert!((sa.get(r, c) - direct[r]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn product_is_exact_in_expectation_structure() {
        // identical inputs: diagonal of (SA)'(SA) is |S a_i|^2, close to |a_i|^2
        let p = JlParams::derive(0.2, 0.05, 32, 5).unwrap();
        let sk = sample_block(&p).unwrap();
        let a = MatrixBuffer::from_rows(
            (0..32)
                .map(|i| vec![(i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()])
                .collect(),
        )
        .unwrap();
        let approx = approx_matrix_product(&sk, &a, &a).unwrap();
        let exact = exact_matrix_product(&a, &a).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let denom = exact.get(i, i).sqrt() * exact.get(j, j).sqrt();
                let err = (approx.get(i, j) - exact.get(i, j)).abs() / denom;
                assert!(err < 0.25, "entry ({i},{j}) err {err}");
            }
        }
    }

    #[test]
    fn requirements_shape_and_validation() {
        let reqs = product_moment_requirements(0.2, 0.05, 4, None).unwrap();
        assert_eq!(reqs.len(), 2);
        assert!(reqs[0].0 < 0.5 && reqs[0].0 > 0.499);
        assert!((reqs[1].0 - (0.2f64 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(reqs[1].1, 0.05);
        // delta' = 0.05^4 = 6.25e-6
        assert!((reqs[0].1 - 6.25e-6).abs() < 1e-12);
        // floor kicks in for huge r
        let floored = product_moment_requirements(0.2, 0.05, 64, None).unwrap();
        assert_eq!(floored[0].1, 2f64.powi(-60));
        // sqrt(eps/r) ceiling
        assert!(product_moment_requirements(0.4, 0.05, 1, None).is_err());
        assert!(product_moment_requirements(0.2, 0.05, 0, None).is_err());
    }

    #[test]
    fn regression_stream_matches_batch_sketch() {
        let p = params(10);
        let mut state = regression_init(&p, 2).unwrap();
        // A: 10 x 2, b = A (2, -1) + small noise-free
        let a_rows: Vec<Vec<f64>> = (0..10)
            .map(|i| vec![1.0, i as f64])
            .collect();
        let x_true = [2.0, -1.0];
        for (i, row) in a_rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                regression_update(
                    &mut state,
                    &RegressionUpdate::Design { row: i, col: j, value: v },
                )
                .unwrap();
            }
            let b = row[0] * x_true[0] + row[1] * x_true[1];
            regression_update(&mut state, &RegressionUpdate::Rhs { row: i, value: b })
                .unwrap();
        }
        // streamed state equals the batch sketch of (A, b)
        let sk = state.sketch().clone();
        let a = MatrixBuffer::from_rows(a_rows.clone()).unwrap();
        let sa = apply_to_columns(&sk, &a).unwrap();
        for r in 0..sk.k() {
            for c in 0..2 {
                assert!((state.sketched_design().get(r, c) - sa.get(r, c)).abs() < 1e-12);
            }
        }
        // consistent system: solution is exact and residual ~ 0
        let (x, residual) = regression_solve(&state).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-9, "{x:?}");
        assert!((x[1] + 1.0).abs() < 1e-9, "{x:?}");
        assert!(residual < 1e-9);
    }

    #[test]
    fn regression_update_touches_exactly_s_rows() {
        let p = params(10);
        let mut state = regression_init(&p, 1).unwrap();
        regression_update(
            &mut state,
            &RegressionUpdate::Design { row: 3, col: 0, value: 1.0 },
        )
        .unwrap();
        let touched = (0..state.sketch().k())
            .filter(|&r| state.sketched_design().get(r, 0) != 0.0)
            .count();
        assert_eq!(touched, p.s);
    }

    #[test]
    fn regression_rejects_bad_updates_and_rank_deficiency() {
        let p = params(10);
        let mut state = regression_init(&p, 2).unwrap();
        assert!(regression_update(
            &mut state,
            &RegressionUpdate::Design { row: 10, col: 0, value: 1.0 }
        )
        .is_err());
        assert!(regression_update(
            &mut state,
            &RegressionUpdate::Design { row: 0, col: 2, value: 1.0 }
        )
        .is_err());
        assert!(regression_update(&mut state, &RegressionUpdate::Rhs { row: 11, value: 1.0 })
            .is_err());
        // duplicate columns collapse rank: fill col 0 and col 1 identically
        for i in 0..10 {
            for c in 0..2 {
                regression_update(
                    &mut state,
                    &RegressionUpdate::Design { row: i, col: c, value: (i + 1) as f64 },
                )
                .unwrap();
            }
        }
        match regression_solve(&state) {
            Err(Error::RankDeficient { column, .. }) => assert_eq!(column, 1),
            other => panic!("expected rank deficiency, got {other:?}"),
        }
        // n > k rejected at init
        assert!(regression_init(&p, 100).is_err());
    }

    #[test]
    fn low_rank_stream_matches_batch() {
        let p = params(8);
        let a = MatrixBuffer::from_rows(
            (0..8)
                .map(|i| vec![(i as f64).sqrt(), 1.0 / (1.0 + i as f64), -0.3 * i as f64])
                .collect(),
        )
        .unwrap();
        let mut st = low_rank_init(&p, 3).unwrap();
        // push out of order
        for &j in &[2usize, 0, 1] {
            low_rank_push_column(&mut st, j, &a.column(j)).unwrap();
        }
        let sk = sample_block(&p).unwrap();
        let sa = apply_to_columns(&sk, &a).unwrap();
        for r in 0..sk.k() {
            for c in 0..3 {
                assert!((st.sketched_columns().get(r, c) - sa.get(r, c)).abs() < 1e-12);
            }
        }
        // S A A' column check: (S A A')_{., i} = sum_j (S a_j) a_j[i]
        for r in 0..sk.k() {
            for i in 0..8 {
                let want: f64 = (0..3).map(|j| sa.get(r, j) * a.get(i, j)).sum();
                assert!((st.sketched_covariance().get(r, i) - want).abs() < 1e-10);
            }
        }
        // double push rejected
        assert!(low_rank_push_column(&mut st, 1, &a.column(1)).is_err());
        assert!(low_rank_push_column(&mut st, 9, &a.column(1)).is_err());
    }
}
