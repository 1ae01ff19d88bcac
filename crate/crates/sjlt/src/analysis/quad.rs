//! The error quadratic form of a sketch at a unit vector.
//!
//! For a sketch S with unit-norm columns and a unit vector x, the squared-norm
//! error Z = |Sx|^2 - |x|^2 decomposes as a block-diagonal quadratic form in
//! the column signs: Z = sum_r sigma_r' T_r sigma_r, where block r ranges over
//! the s row-blocks (block family) or the k rows (graph family), and
//! (T_r)_{ij} = x_i x_j / s exactly when columns i and j collide in block r
//! (zero diagonal). Operator and Frobenius norms of T = diag(T_1..T_b) drive
//! the distortion tail bounds: the block structure forces |T|_2 <= 1/s, and a
//! good code forces |T|_F^2 <= 1/k.
//!
//! Blocks are stored structurally, as the groups of columns that collide in
//! each block; a dense d x d block can be materialized on demand. Norms and
//! quadratic values are evaluated group-wise, which is exact and keeps memory
//! linear in the number of collisions rather than quadratic in d.

use crate::error::{Error, Result};
use crate::kwise::seed::SeedStream;
use crate::sketch::{ConstructionTag, SparseSketch};

#[derive(Debug, Clone)]
pub struct QuadraticForm {
    d: usize,
    s: usize,
    x: Vec<f64>,
    /// blocks[r] lists the collision groups of block r: each group is a set
    /// of >= 2 columns sharing one row inside that block.
    blocks: Vec<Vec<Vec<u32>>>,
}

fn check_unit(x: &[f64]) -> Result<f64> {
    let norm_sq: f64 = x.iter().map(|v| v * v).sum();
    if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "quadratic form requires a unit vector, got |x|^2 = {norm_sq}"
        )));
    }
    Ok(norm_sq)
}

/// Builds the error form of `sketch` at unit `x`. Block-family sketches
/// decompose into s blocks, graph-family ones into k blocks (one per row).
/// Aggregated (dks) and dense sketches have no such decomposition.
pub fn build_quadratic_form(sketch: &SparseSketch, x: &[f64]) -> Result<QuadraticForm> {
    if x.len() != sketch.d() {
        return Err(Error::DimensionMismatch(format!(
            "vector length {} does not match sketch d={}",
            x.len(),
            sketch.d()
        )));
    }
    check_unit(x)?;
    let (d, s, k) = (sketch.d(), sketch.s(), sketch.k());
    let blocks = match sketch.tag() {
        ConstructionTag::Block | ConstructionTag::CodeBlock => {
            let bp = k / s;
            let mut blocks: Vec<Vec<Vec<u32>>> = vec![Vec::new(); s];
            // bucket[r][offset] -> columns hashed to that offset in block r
            let mut bucket: Vec<Vec<u32>> = vec![Vec::new(); bp];
            for r in 0..s {
                for b in bucket.iter_mut() {
                    b.clear();
                }
                for i in 0..d {
                    let (rows, _) = sketch.column(i);
                    // entry r of a block-family column lies in block r
                    let offset = rows[r] as usize - r * bp;
                    bucket[offset].push(i as u32);
                }
                for b in &bucket {
                    if b.len() >= 2 {
                        blocks[r].push(b.clone());
                    }
                }
            }
            blocks
        }
        ConstructionTag::Graph | ConstructionTag::CodeGraph => {
            let mut occupants: Vec<Vec<u32>> = vec![Vec::new(); k];
            for i in 0..d {
                let (rows, _) = sketch.column(i);
                for &r in rows {
                    occupants[r as usize].push(i as u32);
                }
            }
            occupants
                .into_iter()
                .map(|occ| if occ.len() >= 2 { vec![occ] } else { Vec::new() })
                .collect()
        }
        ConstructionTag::Dks => {
            return Err(Error::invalid(
                "aggregated dks sketches collapse collisions, so the per-block \
                 quadratic form is not recoverable",
            ))
        }
        ConstructionTag::Dense => {
            return Err(Error::invalid(
                "dense sketches have no sparse block decomposition",
            ))
        }
    };
    Ok(QuadraticForm {
        d,
        s,
        x: x.to_vec(),
        blocks,
    })
}

impl QuadraticForm {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Number of unordered colliding column pairs across all blocks.
    pub fn collision_pairs(&self) -> u64 {
        self.blocks
            .iter()
            .flatten()
            .map(|g| {
                let n = g.len() as u64;
                n * (n - 1) / 2
            })
            .sum()
    }

    /// Materializes block r as a dense row-major d x d matrix
    /// (symmetric, zero diagonal).
    pub fn dense_block(&self, r: usize) -> Result<Vec<f64>> {
        if r >= self.blocks.len() {
            return Err(Error::invalid(format!(
                "block index {r} out of range 0..{}",
                self.blocks.len()
            )));
        }
        let d = self.d;
        let scale = 1.0 / self.s as f64;
        let mut m = vec![0.0; d * d];
        for group in &self.blocks[r] {
            for (a, &i) in group.iter().enumerate() {
                for &j in group.iter().skip(a + 1) {
                    let (i, j) = (i as usize, j as usize);
                    let v = self.x[i] * self.x[j] * scale;
                    m[i * d + j] = v;
                    m[j * d + i] = v;
                }
            }
        }
        Ok(m)
    }

    /// Matrix-vector product w = T_r v, evaluated group-wise.
    fn block_matvec(&self, r: usize, v: &[f64], w: &mut [f64]) {
        let scale = 1.0 / self.s as f64;
        w.fill(0.0);
        for group in &self.blocks[r] {
            let mut dot = 0.0;
            for &i in group {
                let i = i as usize;
                dot += self.x[i] * v[i];
            }
            for &i in group {
                let i = i as usize;
                // subtract the diagonal term of the rank-one product
                w[i] += scale * self.x[i] * (dot - self.x[i] * v[i]);
            }
        }
    }

    /// Exact squared Frobenius norm of the full block-diagonal form.
    pub fn frobenius_norm_sq(&self) -> f64 {
        let scale = 1.0 / (self.s as f64 * self.s as f64);
        let mut total = 0.0;
        for block in &self.blocks {
            for group in block {
                // sum over ordered pairs i != j of x_i^2 x_j^2
                let sum_sq: f64 = group.iter().map(|&i| {
                    let v = self.x[i as usize];
                    v * v
                }).sum();
                let sum_q: f64 = group.iter().map(|&i| {
                    let v = self.x[i as usize];
                    v * v * v * v
                }).sum();
                total += scale * (sum_sq * sum_sq - sum_q);
            }
        }
        total
    }

    /// Operator (spectral) norm via per-block power iteration. Each step
    /// applies the block twice, which iterates on the positive semidefinite
    /// square of the form: the spectrum of T_r is signed, and near-ties
    /// between +lambda and -lambda make single-application norm ratios
    /// oscillate forever, while the squared iteration is monotone. Iteration
    /// stops when successive lambda^2 estimates differ by at most `tol`; each
    /// block gets up to three restarts of 10^5 iterations before the whole
    /// computation reports non-convergence with the best estimate seen.
    pub fn operator_norm(&self, tol: f64) -> Result<f64> {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::invalid("tolerance must be positive and finite"));
        }
        let mut best_overall = 0.0f64;
        let mut v = vec![0.0; self.d];
        let mut mid = vec![0.0; self.d];
        let mut w = vec![0.0; self.d];
        for (r, block) in self.blocks.iter().enumerate() {
            if block.is_empty() {
                continue;
            }
            let mut block_estimate = None;
            let mut block_best = 0.0f64;
            'restarts: for attempt in 0..3u64 {
                let mut stream = SeedStream::with_path(0x514e, &[r as u64, attempt]);
                for vi in v.iter_mut() {
                    // uniform in [-0.5, 0.5); real-valued so an exact hit on
                    // an eigenvector-orthogonal start is vanishingly unlikely
                    *vi = stream.next_bits(53) as f64 / (1u64 << 53) as f64 - 0.5;
                }
                let norm_v = norm2(&v);
                if norm_v == 0.0 {
                    continue;
                }
                for x in v.iter_mut() {
                    *x /= norm_v;
                }
                let mut prev_sq = f64::INFINITY;
                for _ in 0..100_000 {
                    self.block_matvec(r, &v, &mut mid);
                    self.block_matvec(r, &mid, &mut w);
                    let lambda_sq = norm2(&w);
                    if lambda_sq == 0.0 {
                        // v is (numerically) in the kernel of T^2 = kernel
                        // of T, so this block contributes zero
                        block_estimate = Some(0.0);
                        break 'restarts;
                    }
                    for (vi, wi) in v.iter_mut().zip(&w) {
                        *vi = wi / lambda_sq;
                    }
                    block_best = block_best.max(lambda_sq.sqrt());
                    if (lambda_sq - prev_sq).abs() <= tol {
                        block_estimate = Some(lambda_sq.sqrt());
                        break 'restarts;
                    }
                    prev_sq = lambda_sq;
                }
            }
            match block_estimate {
                Some(est) => best_overall = best_overall.max(est),
                None => {
                    return Err(Error::NonConvergence {
                        best: best_overall.max(block_best),
                    })
                }
            }
        }
        Ok(best_overall)
    }

    /// The realized sign vectors of `sketch` in this form's block structure:
    /// entry [r][i] is the +-1 sign column i uses in block r, or 0.0 when the
    /// column does not touch block r.
    pub fn realized_signs(&self, sketch: &SparseSketch) -> Result<Vec<Vec<f64>>> {
        collect_signs(sketch, self.d, self.blocks.len())
    }

    /// sum_r sigma_r' T_r sigma_r for given per-block sign vectors.
    pub fn quadratic_value(&self, signs: &[Vec<f64>]) -> Result<f64> {
        if signs.len() != self.blocks.len() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} sign blocks, got {}",
                self.blocks.len(),
                signs.len()
            )));
        }
        let scale = 1.0 / self.s as f64;
        let mut total = 0.0;
        for (block, sig) in self.blocks.iter().zip(signs) {
            if sig.len() != self.d {
                return Err(Error::DimensionMismatch(
                    "sign vector length does not match d".into(),
                ));
            }
            for group in block {
                for (a, &i) in group.iter().enumerate() {
                    for &j in group.iter().skip(a + 1) {
                        let (i, j) = (i as usize, j as usize);
                        total += 2.0 * scale * self.x[i] * self.x[j] * sig[i] * sig[j];
                    }
                }
            }
        }
        Ok(total)
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn collect_signs(sketch: &SparseSketch, d: usize, nblocks: usize) -> Result<Vec<Vec<f64>>> {
    let sqrt_s = (sketch.s() as f64).sqrt();
    let mut signs = vec![vec![0.0; d]; nblocks];
    match sketch.tag() {
        ConstructionTag::Block | ConstructionTag::CodeBlock => {
            for i in 0..d {
                let (_, vals) = sketch.column(i);
                for (r, &v) in vals.iter().enumerate() {
                    signs[r][i] = (v * sqrt_s).round();
                }
            }
        }
        ConstructionTag::Graph | ConstructionTag::CodeGraph => {
            for i in 0..d {
                let (rows, vals) = sketch.column(i);
                for (&r, &v) in rows.iter().zip(vals) {
                    signs[r as usize][i] = (v * sqrt_s).round();
                }
            }
        }
        _ => {
            return Err(Error::invalid(
                "realized signs exist only for block- and graph-family sketches",
            ))
        }
    }
    Ok(signs)
}
