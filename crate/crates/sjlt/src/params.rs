//! Dimension, sparsity, and independence parameters for a sketch.
//!
//! Given target distortion eps and failure probability delta, the embedding
//! dimension scales as k ~ c_k * eps^-2 * log2(1/delta) and the per-column
//! sparsity as s ~ c_s * eps^-1 * log2(1/delta). The independence budget ell
//! is the smallest even integer at least log2(1/delta); hash functions use
//! t = 2*ell-wise independence so that ell-th moment bounds hold.

use crate::error::{Error, Result};

pub const DEFAULT_C_K: f64 = 8.0;
pub const DEFAULT_C_S: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct JlParams {
    /// Source dimension.
    pub d: usize,
    /// Distortion target in (0, 1/2); for multiple requirements, the pair
    /// that forced the largest embedding dimension.
    pub eps: f64,
    /// Failure probability target in (0, 1/2).
    pub delta: f64,
    /// Independence budget: smallest even integer >= log2(1/delta), maxed
    /// over all requirement pairs.
    pub ell: u32,
    /// Nonzeros per column.
    pub s: usize,
    /// s rounded up to a power of two; the slot-index space used when
    /// encoding (column, slot) pairs into hash inputs.
    pub s_pow2: usize,
    /// Embedding dimension (number of rows).
    pub k: usize,
    /// k/s when k splits into s power-of-two blocks, else 0. Block-family
    /// samplers require this to be nonzero.
    pub blocks_pow2: usize,
    /// Master seed; all hash and permutation draws derive from it.
    pub seed: u64,
    pub c_k: f64,
    pub c_s: f64,
}

fn next_pow2(n: usize) -> usize {
    n.next_power_of_two()
}

/// Smallest even integer >= log2(1/delta).
pub(crate) fn even_independence_of(delta: f64) -> u32 {
    even_independence(delta)
}

fn even_independence(delta: f64) -> u32 {
    let x = (1.0 / delta).log2();
    let mut l = (x - 1e-9).ceil() as u32;
    l = l.max(2);
    if l % 2 == 1 {
        l += 1;
    }
    l
}

fn validate_pair(eps: f64, delta: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 0.5) || !eps.is_finite() {
        return Err(Error::invalid(format!(
            "distortion eps must lie in (0, 1/2), got {eps}"
        )));
    }
    if !(delta > 0.0 && delta < 0.5) || !delta.is_finite() {
        return Err(Error::invalid(format!(
            "failure probability delta must lie in (0, 1/2), got {delta}"
        )));
    }
    Ok(())
}

/// Derives parameters meeting every (eps, delta) requirement simultaneously:
/// sparsity and dimension are sized by the most demanding pair, and k is
/// rounded up so it splits into s blocks of power-of-two size.
pub fn derive_params(
    requirements: &[(f64, f64)],
    d: usize,
    seed: u64,
    c_k: f64,
    c_s: f64,
) -> Result<JlParams> {
    if requirements.is_empty() {
        return Err(Error::invalid("at least one (eps, delta) pair is required"));
    }
    if d == 0 {
        return Err(Error::invalid("source dimension d must be >= 1"));
    }
    if !(c_k > 0.0) || !(c_s > 0.0) {
        return Err(Error::invalid("constants c_k and c_s must be positive"));
    }
    let mut ell = 0u32;
    let mut sup_s = 0.0f64;
    let mut sup_k = 0.0f64;
    let mut binding = requirements[0];
    for &(eps, delta) in requirements {
        validate_pair(eps, delta)?;
        let li = even_independence(delta);
        ell = ell.max(li);
        sup_s = sup_s.max(f64::from(li) / eps);
        let ki = f64::from(li) / (eps * eps);
        if ki > sup_k {
            sup_k = ki;
            binding = (eps, delta);
        }
    }
    let s = (c_s * sup_s).ceil() as usize;
    let k_raw = (c_k * sup_k).ceil() as usize;
    let blocks = next_pow2(k_raw.div_ceil(s));
    let k = s
        .checked_mul(blocks)
        .ok_or_else(|| Error::invalid("derived dimension k overflows usize"))?;
    Ok(JlParams {
        d,
        eps: binding.0,
        delta: binding.1,
        ell,
        s,
        s_pow2: next_pow2(s),
        k,
        blocks_pow2: blocks,
        seed,
        c_k,
        c_s,
    })
}

impl JlParams {
    /// Convenience single-requirement derivation with default constants.
    pub fn derive(eps: f64, delta: f64, d: usize, seed: u64) -> Result<Self> {
        derive_params(&[(eps, delta)], d, seed, DEFAULT_C_K, DEFAULT_C_S)
    }

    /// Explicit dimensions with block rounding: k is raised to the nearest
    /// s * 2^j >= k so block-family constructions apply.
    pub fn from_dims(
        d: usize,
        k: usize,
        s: usize,
        eps: f64,
        delta: f64,
        seed: u64,
    ) -> Result<Self> {
        validate_pair(eps, delta)?;
        if d == 0 || s == 0 || k == 0 {
            return Err(Error::invalid("d, k, and s must all be >= 1"));
        }
        let blocks = next_pow2(k.div_ceil(s));
        let k_rounded = s
            .checked_mul(blocks)
            .ok_or_else(|| Error::invalid("rounded dimension k overflows usize"))?;
        Ok(JlParams {
            d,
            eps,
            delta,
            ell: even_independence(delta),
            s,
            s_pow2: next_pow2(s),
            k: k_rounded,
            blocks_pow2: blocks,
            seed,
            c_k: DEFAULT_C_K,
            c_s: DEFAULT_C_S,
        })
    }

    /// Explicit dimensions with no rounding. `blocks_pow2` is set only when k
    /// already splits into s power-of-two blocks; otherwise block-family
    /// samplers reject these parameters while replication-based and dense
    /// ones accept them.
    pub fn from_dims_exact(
        d: usize,
        k: usize,
        s: usize,
        eps: f64,
        delta: f64,
        seed: u64,
    ) -> Result<Self> {
        validate_pair(eps, delta)?;
        if d == 0 || s == 0 || k == 0 {
            return Err(Error::invalid("d, k, and s must all be >= 1"));
        }
        if s > k {
            return Err(Error::invalid(format!(
                "sparsity s={s} cannot exceed dimension k={k}"
            )));
        }
        let blocks = if k % s == 0 && (k / s).is_power_of_two() {
            k / s
        } else {
            0
        };
        Ok(JlParams {
            d,
            eps,
            delta,
            ell: even_independence(delta),
            s,
            s_pow2: next_pow2(s),
            k,
            blocks_pow2: blocks,
            seed,
            c_k: DEFAULT_C_K,
            c_s: DEFAULT_C_S,
        })
    }

    /// Hash independence: 2*ell-wise, enough for the ell-th moment argument.
    pub fn t(&self) -> usize {
        2 * self.ell as usize
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}
