//! Error-correcting codes used to derandomize sketch row placement.
//!
//! A q-ary code of length s and large minimum distance keeps the number of
//! row collisions between any two columns small, which is exactly what the
//! distortion analysis needs. Two shapes are supported: q-ary words that
//! pick one offset per block, and constant-weight binary words whose support
//! picks the rows directly.

use crate::error::{Error, Result};
use crate::kwise::field::FieldSpec;
use crate::kwise::hash::sample_kwise_hash;
use crate::kwise::seed::SeedStream;
use crate::params::JlParams;
use std::path::Path;

/// Enumeration cap for generated codes (number of words).
const MAX_WORDS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeSpec {
    /// Words of length `s` over the alphabet `0..q`.
    QAry {
        q: usize,
        s: usize,
        words: Vec<Vec<u16>>,
    },
    /// Binary words of length `len` and constant weight `s`, stored as
    /// strictly ascending support lists.
    BinaryWeight {
        len: usize,
        s: usize,
        supports: Vec<Vec<u32>>,
    },
}

impl CodeSpec {
    pub fn qary(q: usize, s: usize, words: Vec<Vec<u16>>) -> Result<Self> {
        if q < 2 || q > 1 << 16 {
            return Err(Error::invalid("alphabet size q must lie in 2..=65536"));
        }
        for (i, w) in words.iter().enumerate() {
            if w.len() != s {
                return Err(Error::invalid(format!(
                    "word {i} has length {} but the code length is {s}",
                    w.len()
                )));
            }
            if let Some(&sym) = w.iter().find(|&&sym| usize::from(sym) >= q) {
                return Err(Error::invalid(format!(
                    "word {i} contains symbol {sym} outside alphabet 0..{q}"
                )));
            }
        }
        Ok(CodeSpec::QAry { q, s, words })
    }

    pub fn binary_weight(len: usize, s: usize, supports: Vec<Vec<u32>>) -> Result<Self> {
        for (i, sup) in supports.iter().enumerate() {
            if sup.len() != s {
                return Err(Error::invalid(format!(
                    "word {i} has weight {} but the code weight is {s}",
                    sup.len()
                )));
            }
            for w in sup.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::invalid(format!(
                        "word {i} support is not strictly ascending"
                    )));
                }
            }
            if let Some(&last) = sup.last() {
                if last as usize >= len {
                    return Err(Error::invalid(format!(
                        "word {i} support exceeds word length {len}"
                    )));
                }
            }
        }
        Ok(CodeSpec::BinaryWeight { len, s, supports })
    }

    pub fn num_words(&self) -> usize {
        match self {
            CodeSpec::QAry { words, .. } => words.len(),
            CodeSpec::BinaryWeight { supports, .. } => supports.len(),
        }
    }

    /// Code length: symbols per word (q-ary) or bits per word (binary).
    pub fn len(&self) -> usize {
        match self {
            CodeSpec::QAry { s, .. } => *s,
            CodeSpec::BinaryWeight { len, .. } => *len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.num_words() == 0
    }
}

/// Reed-Solomon code over GF(q): all q^m polynomials of degree < m evaluated
/// at the first s field elements. Minimum distance is exactly s - m + 1.
pub fn reed_solomon_code(q: usize, s: usize, m: usize) -> Result<CodeSpec> {
    if !q.is_power_of_two() || q < 4 || q > 1 << 16 {
        return Err(Error::invalid(
            "alphabet size q must be a power of two in 4..=65536",
        ));
    }
    if s == 0 || s > q {
        return Err(Error::invalid(format!(
            "code length s={s} must lie in 1..=q ({q})"
        )));
    }
    if m == 0 || m > s {
        return Err(Error::invalid(format!(
            "message length m={m} must lie in 1..=s ({s})"
        )));
    }
    let n_words = q
        .checked_pow(m as u32)
        .filter(|&n| n <= MAX_WORDS)
        .ok_or_else(|| {
            Error::invalid(format!(
                "q^m = {q}^{m} exceeds the enumeration cap of {MAX_WORDS} words"
            ))
        })?;
    let w = q.trailing_zeros();
    let field = FieldSpec::with_default_poly(w)?;
    let ops = crate::kwise::field::ops_for(&field);

    // Precompute the evaluation table powers[j][x] = x^j for the first s
    // points; each word is then a dot product with its message coefficients.
    let mut powers = vec![vec![0u64; s]; m];
    for x in 0..s {
        powers[0][x] = 1;
        for j in 1..m {
            powers[j][x] = ops.mul(powers[j - 1][x], x as u64);
        }
    }
    let mut words = Vec::with_capacity(n_words);
    let mut msg = vec![0usize; m];
    for _ in 0..n_words {
        let mut word = Vec::with_capacity(s);
        for x in 0..s {
            let mut acc = 0u64;
            for (j, &c) in msg.iter().enumerate() {
                acc ^= ops.mul(c as u64, powers[j][x]);
            }
            word.push(acc as u16);
        }
        words.push(word);
        // lexicographic increment, least-significant coefficient first
        for slot in msg.iter_mut() {
            *slot += 1;
            if *slot < q {
                break;
            }
            *slot = 0;
        }
    }
    CodeSpec::qary(q, s, words)
}

/// A code of d independent hashed words: symbol (i, j) is a t-wise
/// independent function of the pair. Deterministic in the seed.
pub fn random_code(d: usize, s: usize, q: usize, t: usize, seed: u64) -> Result<CodeSpec> {
    if !q.is_power_of_two() || q < 2 || q > 1 << 16 {
        return Err(Error::invalid(
            "alphabet size q must be a power of two in 2..=65536",
        ));
    }
    if d == 0 || s == 0 {
        return Err(Error::invalid("need d >= 1 words of length s >= 1"));
    }
    if d > MAX_WORDS {
        return Err(Error::invalid(format!(
            "requested {d} words exceeds the enumeration cap of {MAX_WORDS}"
        )));
    }
    let s_pow2 = s.next_power_of_two() as u64;
    let shift = s_pow2.trailing_zeros();
    let max_code = (d as u64)
        .checked_mul(s_pow2)
        .ok_or_else(|| Error::invalid("d * s overflows the hash domain"))?
        - 1;
    let field = FieldSpec::for_domain(max_code.max(q as u64 - 1))?;
    let mut stream = SeedStream::with_path(seed, &[b'c'.into(), 1]);
    let hash = sample_kwise_hash(&field, &mut stream, t)?;
    let mask = (q - 1) as u64;
    let mut words = Vec::with_capacity(d);
    for i in 0..d {
        let mut word = Vec::with_capacity(s);
        for j in 0..s {
            let sym = hash.eval_fast(((i as u64) << shift) | j as u64) & mask;
            word.push(sym as u16);
        }
        words.push(word);
    }
    CodeSpec::qary(q, s, words)
}

/// Exact minimum pairwise Hamming distance, brute force over all pairs.
/// Duplicate words give distance zero.
pub fn min_distance(code: &CodeSpec) -> Result<usize> {
    if code.num_words() < 2 {
        return Err(Error::invalid(
            "minimum distance needs at least two code words",
        ));
    }
    let mut best = usize::MAX;
    match code {
        CodeSpec::QAry { words, .. } => {
            for i in 0..words.len() {
                for j in i + 1..words.len() {
                    let dist = words[i]
                        .iter()
                        .zip(&words[j])
                        .filter(|(a, b)| a != b)
                        .count();
                    best = best.min(dist);
                    if best == 0 {
                        return Ok(0);
                    }
                }
            }
        }
        CodeSpec::BinaryWeight { s, supports, .. } => {
            for i in 0..supports.len() {
                for j in i + 1..supports.len() {
                    let inter = sorted_intersection(&supports[i], &supports[j]);
                    best = best.min(2 * (s - inter));
                    if best == 0 {
                        return Ok(0);
                    }
                }
            }
        }
    }
    Ok(best)
}

fn sorted_intersection(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Deliberately ruins a q-ary code by overwriting the first symbol of every
/// word with the constant 1: columns then always collide in block 0.
/// Idempotent; constant-weight binary codes are rejected because the
/// operation would change their weight.
pub fn degrade_code(code: &CodeSpec) -> Result<CodeSpec> {
    match code {
        CodeSpec::QAry { q, s, words } => {
            if *s == 0 {
                return Err(Error::invalid("cannot degrade an empty-length code"));
            }
            let mut words = words.clone();
            for w in &mut words {
                w[0] = 1;
            }
            CodeSpec::qary(*q, *s, words)
        }
        CodeSpec::BinaryWeight { .. } => Err(Error::CodeMismatch(
            "degradation is defined for q-ary codes only".into(),
        )),
    }
}

/// Tests whether the code's minimum distance is large enough for the
/// (s, k) in `params`: d_min >= s - c_dist * s^2 / k. Codes passing this
/// keep the expected column-collision mass at the level the distortion
/// bound assumes.
pub fn check_code_for_params(code: &CodeSpec, params: &JlParams, c_dist: f64) -> Result<bool> {
    if !(c_dist > 0.0) || !c_dist.is_finite() {
        return Err(Error::invalid("c_dist must be positive and finite"));
    }
    let d_min = min_distance(code)? as f64;
    let s = params.s as f64;
    let k = params.k as f64;
    let threshold = s - c_dist * s * s / k;
    Ok(d_min >= threshold - 1e-9)
}

/// Expands a q-ary code into the equivalent constant-weight binary code on
/// the block layout: symbol v in position r becomes a one at index r*q + v.
/// Distances double: two words differing in t symbols differ in 2t bits.
pub fn qary_to_binary(code: &CodeSpec) -> Result<CodeSpec> {
    match code {
        CodeSpec::QAry { q, s, words } => {
            let len = q
                .checked_mul(*s)
                .ok_or_else(|| Error::invalid("q * s overflows the binary length"))?;
            let supports = words
                .iter()
                .map(|w| {
                    w.iter()
                        .enumerate()
                        .map(|(r, &sym)| (r * q + usize::from(sym)) as u32)
                        .collect()
                })
                .collect();
            CodeSpec::binary_weight(len, *s, supports)
        }
        CodeSpec::BinaryWeight { .. } => Err(Error::CodeMismatch(
            "code is already in binary constant-weight form".into(),
        )),
    }
}

/// Writes one word per line as comma-separated decimal symbols. Binary
/// constant-weight words are written as full 0/1 rows of length `len`.
pub fn save_code(code: &CodeSpec, path: &Path) -> Result<()> {
    let mut out = String::new();
    match code {
        CodeSpec::QAry { words, .. } => {
            for w in words {
                let line: Vec<String> = w.iter().map(|s| s.to_string()).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
        }
        CodeSpec::BinaryWeight { len, supports, .. } => {
            for sup in supports {
                let mut bits = vec![0u8; *len];
                for &i in sup {
                    bits[i as usize] = 1;
                }
                let line: Vec<String> = bits.iter().map(|b| b.to_string()).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Loads a code from CSV given the expected sketch shape. Rows of length `k`
/// holding only 0/1 with exactly s ones parse as a constant-weight binary
/// code; rows of length `s` parse as a q-ary code with alphabet q = k/s.
pub fn load_code(path: &Path, s: usize, k: usize) -> Result<CodeSpec> {
    if s == 0 || k == 0 || k % s != 0 {
        return Err(Error::invalid(
            "expected shape requires s >= 1 and k a multiple of s",
        ));
    }
    let text = std::fs::read_to_string(path)?;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for tok in line.split(',') {
            let v: u32 = tok.trim().parse().map_err(|_| {
                Error::Format(format!("line {}: bad symbol '{tok}'", lineno + 1))
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Format("code file contains no words".into()));
    }
    let width = rows[0].len();
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::Format("code words have inconsistent lengths".into()));
    }
    let binary_shaped = width == k
        && rows
            .iter()
            .all(|r| r.iter().all(|&v| v <= 1) && r.iter().filter(|&&v| v == 1).count() == s);
    if binary_shaped {
        let supports = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v == 1)
                    .map(|(i, _)| i as u32)
                    .collect()
            })
            .collect();
        return CodeSpec::binary_weight(k, s, supports);
    }
    if width == s {
        let q = k / s;
        let words = rows
            .iter()
            .map(|r| r.iter().map(|&v| v as u16).collect())
            .collect();
        return CodeSpec::qary(q, s, words);
    }
    Err(Error::Format(format!(
        "rows of length {width} match neither q-ary (s={s}) nor binary (k={k}) shape"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reed_solomon_distances_are_mds() {
        for (q, s, m, want) in [
            (4, 4, 2, 3),
            (8, 8, 2, 7),
            (8, 8, 1, 8),
            (16, 16, 2, 15),
            (4, 4, 4, 1),
        ] {
            let code = reed_solomon_code(q, s, m).unwrap();
            assert_eq!(code.num_words(), q.pow(m as u32));
            assert_eq!(min_distance(&code).unwrap(), want, "RS({q},{s},{m})");
        }
    }

    #[test]
    fn reed_solomon_first_word_is_zero_and_words_are_distinct() {
        let code = reed_solomon_code(8, 8, 2).unwrap();
        if let CodeSpec::QAry { words, .. } = &code {
            assert!(words[0].iter().all(|&v| v == 0));
            let mut sorted = words.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), 64);
        } else {
            panic!("expected q-ary code");
        }
    }

    #[test]
    fn reed_solomon_rejects_bad_shapes() {
        assert!(reed_solomon_code(6, 4, 2).is_err()); // not a power of two
        assert!(reed_solomon_code(4, 5, 2).is_err()); // s > q
        assert!(reed_solomon_code(4, 4, 5).is_err()); // m > s
        assert!(reed_solomon_code(4, 4, 0).is_err());
        assert!(reed_solomon_code(2, 2, 1).is_err()); // alphabet too small
        assert!(reed_solomon_code(1 << 16, 4, 2).is_err()); // q^m over cap
    }

    #[test]
    fn degrade_forces_block_zero_collisions_and_is_idempotent() {
        let code = reed_solomon_code(8, 8, 2).unwrap();
        let bad = degrade_code(&code).unwrap();
        // distinct affine words agree on at most one evaluation point, so
        // pinning symbol 0 leaves >= 6 disagreements; pairs crossing at a
        // nonzero point attain exactly 6 (down from the clean distance 7).
        assert_eq!(min_distance(&bad).unwrap(), 6);
        if let CodeSpec::QAry { words, .. } = &bad {
            assert!(words.iter().all(|w| w[0] == 1));
        }
        assert_eq!(degrade_code(&bad).unwrap(), bad);
    }

    #[test]
    fn parameter_check_accepts_good_and_rejects_degraded() {
        let params = JlParams::from_dims_exact(64, 64, 8, 0.25, 0.05, 0).unwrap();
        let code = reed_solomon_code(8, 8, 2).unwrap();
        // threshold: 8 - 64/64 = 7, and d_min = 7
        assert!(check_code_for_params(&code, &params, 1.0).unwrap());
        let bad = degrade_code(&code).unwrap();
        assert!(!check_code_for_params(&bad, &params, 1.0).unwrap());
        // a larger allowance lowers the bar below 7
        assert!(check_code_for_params(&code, &params, 8.1).unwrap());
        assert!(check_code_for_params(&code, &params, -1.0).is_err());
    }

    #[test]
    fn binary_expansion_doubles_distance() {
        let code = reed_solomon_code(4, 4, 2).unwrap();
        let bin = qary_to_binary(&code).unwrap();
        assert_eq!(bin.len(), 16);
        assert_eq!(min_distance(&bin).unwrap(), 6);
        if let CodeSpec::BinaryWeight { s, supports, .. } = &bin {
            assert_eq!(*s, 4);
            assert_eq!(supports.len(), 16);
        }
        assert!(qary_to_binary(&bin).is_err());
    }

    #[test]
    fn random_code_is_deterministic_with_bounded_symbols() {
        let a = random_code(100, 8, 16, 4, 99).unwrap();
        let b = random_code(100, 8, 16, 4, 99).unwrap();
        assert_eq!(a, b);
        let c = random_code(100, 8, 16, 4, 100).unwrap();
        assert_ne!(a, c);
        if let CodeSpec::QAry { words, .. } = &a {
            assert!(words.iter().flatten().all(|&v| v < 16));
            // symbols should spread across the alphabet
            let mut seen = vec![false; 16];
            for &v in words.iter().flatten() {
                seen[usize::from(v)] = true;
            }
            assert!(seen.iter().all(|&x| x));
        }
    }

    #[test]
    fn csv_round_trips_both_shapes() {
        let dir = tempfile::tempdir().unwrap();

        let qary = reed_solomon_code(8, 8, 2).unwrap();
        let qpath = dir.path().join("rs.csv");
        save_code(&qary, &qpath).unwrap();
        assert_eq!(load_code(&qpath, 8, 64).unwrap(), qary);

        let bin = qary_to_binary(&reed_solomon_code(4, 4, 2).unwrap()).unwrap();
        let bpath = dir.path().join("bin.csv");
        save_code(&bin, &bpath).unwrap();
        assert_eq!(load_code(&bpath, 4, 16).unwrap(), bin);
    }

    #[test]
    fn csv_loader_rejects_malformed_input() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "1,2,3\n4,5\n").unwrap();
        assert!(load_code(&path, 3, 12).is_err()); // ragged rows
        std::fs::write(&path, "1,x,3\n").unwrap();
        assert!(load_code(&path, 3, 12).is_err()); // non-numeric
        std::fs::write(&path, "").unwrap();
        assert!(load_code(&path, 3, 12).is_err()); // empty
        std::fs::write(&path, "1,2,3,4\n").unwrap();
        assert!(load_code(&path, 3, 12).is_err()); // wrong width
    }

    #[test]
    fn min_distance_needs_two_words() {
        let one = CodeSpec::qary(4, 2, vec![vec![0, 1]]).unwrap();
        assert!(min_distance(&one).is_err());
    }
}
