//! Samplers for the sparse sketch constructions.
//!
//! All randomness flows from `params.seed` through labeled seed streams, so
//! a (params, construction) pair always yields the same matrix. Hash inputs
//! encode a (column, slot) pair as `column << log2(s_pow2) | slot`, and the
//! field width is sized to the larger of that code space and the row space,
//! with a floor of 8 bits.

use super::{ConstructionTag, SparseSketch};
use crate::codes::CodeSpec;
use crate::error::{Error, Result};
use crate::kwise::field::{bits_for, FieldSpec};
use crate::kwise::hash::{sample_kwise_hash, KWiseHash};
use crate::kwise::seed::{sample_distinct_rows, SeedStream};
use crate::params::JlParams;

const PATH_HASH: u64 = 1;
const PATH_SIGN: u64 = 2;
const PATH_ROWS: u64 = 3;

fn tag_code(tag: ConstructionTag) -> u64 {
    u64::from(tag.to_byte())
}

/// Field sized for hash inputs up to `d * slots - 1` and outputs up to
/// `rows - 1`, with the 8-bit floor.
fn domain_field(d: usize, slots: usize, rows: usize) -> Result<FieldSpec> {
    let code_space = (d as u64)
        .checked_mul(slots as u64)
        .ok_or_else(|| Error::invalid("d * s_pow2 overflows the 64-bit hash domain"))?;
    let max_value = code_space.max(rows as u64) - 1;
    let w = bits_for(max_value).max(8);
    FieldSpec::with_default_poly(w)
}

fn sign_value(bit: u64, magnitude: f64) -> f64 {
    if bit & 1 == 1 {
        -magnitude
    } else {
        magnitude
    }
}

struct HashPair {
    hash: KWiseHash,
    sign: KWiseHash,
    bits: u64,
}

fn sample_hash_pair(params: &JlParams, tag: ConstructionTag, field: &FieldSpec) -> Result<HashPair> {
    let code = tag_code(tag);
    let mut hs = SeedStream::with_path(params.seed, &[code, PATH_HASH]);
    let mut ss = SeedStream::with_path(params.seed, &[code, PATH_SIGN]);
    let hash = sample_kwise_hash(field, &mut hs, params.t())?;
    let sign = sample_kwise_hash(field, &mut ss, params.t())?;
    Ok(HashPair {
        hash,
        sign,
        bits: hs.bits_consumed() + ss.bits_consumed(),
    })
}

/// Block construction: rows split into s blocks of `blocks_pow2` rows; each
/// column gets one +-1/sqrt(s) entry per block, at a hashed offset.
pub fn sample_block(params: &JlParams) -> Result<SparseSketch> {
    let (d, s, k, bp) = (params.d, params.s, params.k, params.blocks_pow2);
    if bp == 0 {
        return Err(Error::invalid(
            "parameters are not block-compatible: k must be s blocks of power-of-two size",
        ));
    }
    debug_assert_eq!(s * bp, k);
    let shift = params.s_pow2.trailing_zeros();
    let field = domain_field(d, params.s_pow2, k)?;
    let pair = sample_hash_pair(params, ConstructionTag::Block, &field)?;
    let magnitude = 1.0 / (s as f64).sqrt();
    let offset_mask = (bp - 1) as u64;

    let mut offsets = Vec::with_capacity(d + 1);
    let mut rows = Vec::with_capacity(d * s);
    let mut values = Vec::with_capacity(d * s);
    offsets.push(0);
    let mut codes = vec![0u64; s];
    let mut hv = vec![0u64; s];
    let mut sv = vec![0u64; s];
    for i in 0..d {
        for (r, c) in codes.iter_mut().enumerate() {
            *c = ((i as u64) << shift) | r as u64;
        }
        pair.hash.eval_many(&codes, &mut hv);
        pair.sign.eval_many(&codes, &mut sv);
        for r in 0..s {
            rows.push((r * bp) as u64 + (hv[r] & offset_mask));
            values.push(sign_value(sv[r], magnitude));
        }
        offsets.push(rows.len());
    }
    SparseSketch::from_parts(
        k,
        d,
        s,
        ConstructionTag::Block,
        params.seed,
        pair.bits,
        offsets,
        rows,
        values,
    )
}

/// Graph construction: each column picks s distinct rows uniformly (without
/// replacement), with hashed signs.
pub fn sample_graph(params: &JlParams) -> Result<SparseSketch> {
    let (d, s, k) = (params.d, params.s, params.k);
    if s > k {
        return Err(Error::invalid(format!(
            "sparsity s={s} cannot exceed dimension k={k}"
        )));
    }
    let shift = params.s_pow2.trailing_zeros();
    let field = domain_field(d, params.s_pow2, k)?;
    let code = tag_code(ConstructionTag::Graph);
    let mut ss = SeedStream::with_path(params.seed, &[code, PATH_SIGN]);
    let sign = sample_kwise_hash(&field, &mut ss, params.t())?;
    let mut total_bits = ss.bits_consumed();
    let rows_root = SeedStream::with_path(params.seed, &[code, PATH_ROWS]);
    let magnitude = 1.0 / (s as f64).sqrt();

    let mut offsets = Vec::with_capacity(d + 1);
    let mut rows = Vec::with_capacity(d * s);
    let mut values = Vec::with_capacity(d * s);
    offsets.push(0);
    let mut col: Vec<(u64, f64)> = Vec::with_capacity(s);
    for i in 0..d {
        let mut cs = rows_root.child(i as u64);
        let picked = sample_distinct_rows(&mut cs, s, k)?;
        total_bits += cs.bits_consumed();
        col.clear();
        for (slot, &row) in picked.iter().enumerate() {
            let sv = sign.eval_fast(((i as u64) << shift) | slot as u64);
            col.push((row as u64, sign_value(sv, magnitude)));
        }
        col.sort_unstable_by_key(|&(r, _)| r);
        for &(r, v) in &col {
            rows.push(r);
            values.push(v);
        }
        offsets.push(rows.len());
    }
    SparseSketch::from_parts(
        k,
        d,
        s,
        ConstructionTag::Graph,
        params.seed,
        total_bits,
        offsets,
        rows,
        values,
    )
}

/// Replicated-hash construction: each coordinate is copied s times and every
/// copy is hashed into the row space with replacement; copies landing on the
/// same row merge into one entry of value (signed count)/sqrt(s). The row
/// space is padded to the next power of two, so the returned sketch may have
/// a larger k than requested.
pub fn sample_dks(params: &JlParams) -> Result<SparseSketch> {
    let (d, s) = (params.d, params.s);
    let k_pad = params.k.next_power_of_two();
    let shift = params.s_pow2.trailing_zeros();
    let field = domain_field(d, params.s_pow2, k_pad)?;
    let pair = sample_hash_pair(params, ConstructionTag::Dks, &field)?;
    let sqrt_s = (s as f64).sqrt();
    let row_mask = (k_pad - 1) as u64;

    let mut offsets = Vec::with_capacity(d + 1);
    let mut rows = Vec::with_capacity(d * s);
    let mut values = Vec::with_capacity(d * s);
    offsets.push(0);
    let mut codes = vec![0u64; s];
    let mut hv = vec![0u64; s];
    let mut sv = vec![0u64; s];
    let mut hits: Vec<(u64, i64)> = Vec::with_capacity(s);
    for i in 0..d {
        for (j, c) in codes.iter_mut().enumerate() {
            *c = ((i as u64) << shift) | j as u64;
        }
        pair.hash.eval_many(&codes, &mut hv);
        pair.sign.eval_many(&codes, &mut sv);
        hits.clear();
        for j in 0..s {
            let delta = if sv[j] & 1 == 1 { -1i64 } else { 1i64 };
            hits.push((hv[j] & row_mask, delta));
        }
        hits.sort_unstable_by_key(|&(r, _)| r);
        let mut idx = 0;
        while idx < hits.len() {
            let row = hits[idx].0;
            let mut count = 0i64;
            while idx < hits.len() && hits[idx].0 == row {
                count += hits[idx].1;
                idx += 1;
            }
            if count != 0 {
                rows.push(row);
                values.push(count as f64 / sqrt_s);
            }
        }
        offsets.push(rows.len());
    }
    SparseSketch::from_parts(
        k_pad,
        d,
        s,
        ConstructionTag::Dks,
        params.seed,
        pair.bits,
        offsets,
        rows,
        values,
    )
}

/// Dense baseline: every entry is an independent-looking hashed sign scaled
/// by 1/sqrt(k).
pub fn sample_dense(params: &JlParams) -> Result<SparseSketch> {
    let (d, k) = (params.d, params.k);
    let k_pow2 = k.next_power_of_two();
    let shift = k_pow2.trailing_zeros();
    let field = domain_field(d, k_pow2, k)?;
    let code = tag_code(ConstructionTag::Dense);
    let mut ss = SeedStream::with_path(params.seed, &[code, PATH_SIGN]);
    let sign = sample_kwise_hash(&field, &mut ss, params.t())?;
    let magnitude = 1.0 / (k as f64).sqrt();

    let mut offsets = Vec::with_capacity(d + 1);
    let mut rows = Vec::with_capacity(d * k);
    let mut values = Vec::with_capacity(d * k);
    offsets.push(0);
    let mut codes = vec![0u64; k];
    let mut sv = vec![0u64; k];
    for i in 0..d {
        for (r, c) in codes.iter_mut().enumerate() {
            *c = ((i as u64) << shift) | r as u64;
        }
        sign.eval_many(&codes, &mut sv);
        for r in 0..k {
            rows.push(r as u64);
            values.push(sign_value(sv[r], magnitude));
        }
        offsets.push(rows.len());
    }
    SparseSketch::from_parts(
        k,
        d,
        k,
        ConstructionTag::Dense,
        params.seed,
        ss.bits_consumed(),
        offsets,
        rows,
        values,
    )
}

/// Derandomized sketch: row positions come from a code word per column while
/// signs stay hashed. q-ary codes fill the block layout (q = k/s symbols
/// select the offset inside each of s blocks); constant-weight binary codes
/// fill the graph layout (supports become rows).
pub fn sketch_from_code(code: &CodeSpec, params: &JlParams) -> Result<SparseSketch> {
    match code {
        CodeSpec::QAry { q, s, words } => {
            let (d, k) = (params.d, params.k);
            if *s != params.s {
                return Err(Error::CodeMismatch(format!(
                    "code length {s} does not match sparsity s={}",
                    params.s
                )));
            }
            if params.blocks_pow2 == 0 || *q != params.blocks_pow2 {
                return Err(Error::CodeMismatch(format!(
                    "alphabet size {q} does not match block count k/s={}",
                    if params.s == 0 { 0 } else { params.k / params.s }
                )));
            }
            if words.len() < d {
                return Err(Error::CodeMismatch(format!(
                    "code has {} words but d={d} columns are required",
                    words.len()
                )));
            }
            let shift = params.s_pow2.trailing_zeros();
            let field = domain_field(d, params.s_pow2, k)?;
            let tag = ConstructionTag::CodeBlock;
            let cbyte = tag_code(tag);
            let mut ss = SeedStream::with_path(params.seed, &[cbyte, PATH_SIGN]);
            let sign = sample_kwise_hash(&field, &mut ss, params.t())?;
            let magnitude = 1.0 / (*s as f64).sqrt();

            let mut offsets = Vec::with_capacity(d + 1);
            let mut rows = Vec::with_capacity(d * s);
            let mut values = Vec::with_capacity(d * s);
            offsets.push(0);
            for (i, word) in words.iter().take(d).enumerate() {
                for (r, &sym) in word.iter().enumerate() {
                    let sv = sign.eval_fast(((i as u64) << shift) | r as u64);
                    rows.push((r * q) as u64 + u64::from(sym));
                    values.push(sign_value(sv, magnitude));
                }
                offsets.push(rows.len());
            }
            SparseSketch::from_parts(
                k,
                d,
                *s,
                tag,
                params.seed,
                ss.bits_consumed(),
                offsets,
                rows,
                values,
            )
        }
        CodeSpec::BinaryWeight { len, s, supports } => {
            let (d, k) = (params.d, params.k);
            if *len != k {
                return Err(Error::CodeMismatch(format!(
                    "code word length {len} does not match dimension k={k}"
                )));
            }
            if *s != params.s {
                return Err(Error::CodeMismatch(format!(
                    "code weight {s} does not match sparsity s={}",
                    params.s
                )));
            }
            if supports.len() < d {
                return Err(Error::CodeMismatch(format!(
                    "code has {} words but d={d} columns are required",
                    supports.len()
                )));
            }
            let shift = params.s_pow2.trailing_zeros();
            let field = domain_field(d, params.s_pow2, k)?;
            let tag = ConstructionTag::CodeGraph;
            let cbyte = tag_code(tag);
            let mut ss = SeedStream::with_path(params.seed, &[cbyte, PATH_SIGN]);
            let sign = sample_kwise_hash(&field, &mut ss, params.t())?;
            let magnitude = 1.0 / (*s as f64).sqrt();

            let mut offsets = Vec::with_capacity(d + 1);
            let mut rows = Vec::with_capacity(d * s);
            let mut values = Vec::with_capacity(d * s);
            offsets.push(0);
            for (i, support) in supports.iter().take(d).enumerate() {
                for (slot, &row) in support.iter().enumerate() {
                    let sv = sign.eval_fast(((i as u64) << shift) | slot as u64);
                    rows.push(u64::from(row));
                    values.push(sign_value(sv, magnitude));
                }
                offsets.push(rows.len());
            }
            SparseSketch::from_parts(
                k,
                d,
                *s,
                tag,
                params.seed,
                ss.bits_consumed(),
                offsets,
                rows,
                values,
            )
        }
    }
}

/// Dispatch by tag for the hash-based constructions. Code-based tags need an
/// explicit code, so they are rejected here.
pub fn sample_sketch(tag: ConstructionTag, params: &JlParams) -> Result<SparseSketch> {
    match tag {
        ConstructionTag::Block => sample_block(params),
        ConstructionTag::Graph => sample_graph(params),
        ConstructionTag::Dks => sample_dks(params),
        ConstructionTag::Dense => sample_dense(params),
        ConstructionTag::CodeBlock | ConstructionTag::CodeGraph => Err(Error::invalid(
            "code-based constructions require an explicit code; use sketch_from_code",
        )),
    }
}
