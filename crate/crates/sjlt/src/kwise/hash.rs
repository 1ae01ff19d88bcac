//! t-wise independent hash functions over GF(2^w).
//!
//! A hash is a uniformly random polynomial of degree < t with coefficients in
//! the field; evaluations at any t distinct points are jointly uniform. The
//! coefficients come from a [`SeedStream`](super::seed::SeedStream), consuming
//! exactly t*w bits, so a hash is reproducible from (seed path, t, field).

use super::field::{ops_for, FieldOps, FieldSpec};
use super::seed::SeedStream;
use crate::error::{Error, Result};
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct KWiseHash {
    field: FieldSpec,
    /// Constant-first coefficients: h(x) = coeffs[0] + coeffs[1] x + ...
    coeffs: Vec<u64>,
    ops: Arc<FieldOps>,
}

/// Draws a t-wise independent hash by sampling t coefficients of w bits each
/// from the stream (exactly t*w bits, constant term first).
pub fn sample_kwise_hash(
    field: &FieldSpec,
    stream: &mut SeedStream,
    t: usize,
) -> Result<KWiseHash> {
    if t == 0 {
        return Err(Error::invalid("independence parameter t must be >= 1"));
    }
    let coeffs: Vec<u64> = (0..t).map(|_| stream.next_bits(field.w())).collect();
    Ok(KWiseHash {
        field: field.clone(),
        coeffs,
        ops: ops_for(field),
    })
}

impl KWiseHash {
    /// Rebuilds a hash from explicit coefficients (constant first). Intended
    /// for fixtures; all coefficients must fit the field width.
    pub fn from_coeffs(field: &FieldSpec, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("hash needs at least one coefficient"));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| !field.contains(c)) {
            return Err(Error::invalid(format!(
                "coefficient {c:#x} exceeds field width {}",
                field.w()
            )));
        }
        Ok(KWiseHash {
            field: field.clone(),
            coeffs,
            ops: ops_for(field),
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Independence parameter t (number of coefficients).
    pub fn t(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Evaluates h at one point via Horner's rule.
    pub fn eval(&self, x: u64) -> Result<u64> {
        if !self.field.contains(x) {
            return Err(Error::invalid(format!(
                "evaluation point {x:#x} exceeds field width {}",
                self.field.w()
            )));
        }
        Ok(self.ops.eval_horner(&self.coeffs, x))
    }

    /// Horner evaluation without the range check; callers guarantee x < 2^w.
    #[inline]
    pub(crate) fn eval_fast(&self, x: u64) -> u64 {
        debug_assert!(self.field.contains(x));
        self.ops.eval_horner(&self.coeffs, x)
    }

    /// Evaluates many points with interleaved Horner chains. Field-exact, so
    /// results equal [`KWiseHash::eval`] point for point.
    pub(crate) fn eval_many(&self, xs: &[u64], out: &mut [u64]) {
        debug_assert!(xs.iter().all(|&x| self.field.contains(x)));
        self.ops.eval_horner_many(&self.coeffs, xs, out);
    }

    /// Evaluates h at all points using subproduct trees on groups of t
    /// points: build the monic product of (x - p_i) over a group, reduce h
    /// modulo it once, then push remainders down the tree. Exact over the
    /// field, so the output matches Horner evaluation exactly.
    pub fn eval_batch(&self, points: &[u64]) -> Result<Vec<u64>> {
        for &x in points {
            if !self.field.contains(x) {
                return Err(Error::invalid(format!(
                    "evaluation point {x:#x} exceeds field width {}",
                    self.field.w()
                )));
            }
        }
        let mut out = Vec::with_capacity(points.len());
        for group in points.chunks(self.coeffs.len().max(1)) {
            self.eval_group(group, &mut out);
        }
        Ok(out)
    }

    fn eval_group(&self, group: &[u64], out: &mut Vec<u64>) {
        // Subproduct tree over the group, leaves are the monic linears x + p.
        let mut levels: Vec<Vec<Vec<u64>>> = Vec::new();
        let leaves: Vec<Vec<u64>> = group.iter().map(|&p| vec![p, 1]).collect();
        levels.push(leaves);
        while levels.last().expect("nonempty tree").len() > 1 {
            let prev = levels.last().expect("nonempty tree");
            let mut next = Vec::with_capacity(prev.len().div_ceil(2));
            for pair in prev.chunks(2) {
                if pair.len() == 2 {
                    next.push(poly_mul(&pair[0], &pair[1], &self.ops));
                } else {
                    next.push(pair[0].clone());
                }
            }
            levels.push(next);
        }
        // Reduce h once at the root, then push remainders toward the leaves.
        let root_rem = poly_rem(&self.coeffs, &levels.last().expect("root")[0], &self.ops);
        let depth = levels.len();
        let mut rems: Vec<Vec<Vec<u64>>> = vec![Vec::new(); depth];
        rems[depth - 1] = vec![root_rem];
        for lvl in (0..depth - 1).rev() {
            let mut cur = Vec::with_capacity(levels[lvl].len());
            for (i, node) in levels[lvl].iter().enumerate() {
                let parent = &rems[lvl + 1][i / 2];
                cur.push(poly_rem(parent, node, &self.ops));
            }
            rems[lvl] = cur;
        }
        for leaf_rem in &rems[0] {
            out.push(leaf_rem.first().copied().unwrap_or(0));
        }
    }
}

/// Schoolbook product of two field polynomials (coefficient vectors,
/// constant first).
fn poly_mul(a: &[u64], b: &[u64], ops: &FieldOps) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] ^= ops.mul(ai, bj);
        }
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m` (degree >= 1). Monic
/// divisors need no field inversions: subtract lead * x^shift * m directly.
fn poly_rem(a: &[u64], m: &[u64], ops: &FieldOps) -> Vec<u64> {
    let dm = m.len() - 1;
    debug_assert!(dm >= 1 && m[dm] == 1, "divisor must be monic of degree >= 1");
    let mut r: Vec<u64> = a.to_vec();
    while r.len() > dm {
        let lead = *r.last().expect("nonempty remainder");
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (j, &mj) in m.iter().enumerate().take(dm) {
                r[shift + j] ^= ops.mul(lead, mj);
            }
        }
        r.pop();
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kwise::field::gf_mul;

    fn stream() -> SeedStream {
        SeedStream::with_path(1234, &[9])
    }

    #[test]
    fn sampling_consumes_exactly_t_times_w_bits() {
        for (w, t) in [(8u32, 2usize), (16, 6), (32, 12), (64, 3)] {
            let f = FieldSpec::with_default_poly(w).unwrap();
            let mut s = stream();
            let before = s.bits_consumed();
            let h = sample_kwise_hash(&f, &mut s, t).unwrap();
            assert_eq!(s.bits_consumed() - before, (t as u64) * u64::from(w));
            assert_eq!(h.t(), t);
        }
    }

    #[test]
    fn zero_independence_is_rejected() {
        let f = FieldSpec::with_default_poly(8).unwrap();
        assert!(sample_kwise_hash(&f, &mut stream(), 0).is_err());
    }

    #[test]
    fn eval_checks_range() {
        let f = FieldSpec::with_default_poly(8).unwrap();
        let h = sample_kwise_hash(&f, &mut stream(), 3).unwrap();
        assert!(h.eval(0x100).is_err());
        assert!(h.eval(0xFF).is_ok());
        assert!(h.eval_batch(&[1, 0x100]).is_err());
    }

    #[test]
    fn horner_matches_naive_powers() {
        let f = FieldSpec::with_default_poly(16).unwrap();
        let h = sample_kwise_hash(&f, &mut stream(), 5).unwrap();
        for x in [0u64, 1, 2, 777, 65_535] {
            let mut acc = 0u64;
            let mut xp = 1u64;
            for &c in h.coeffs() {
                acc ^= gf_mul(c, xp, &f).unwrap();
                xp = gf_mul(xp, x, &f).unwrap();
            }
            assert_eq!(h.eval(x).unwrap(), acc, "x={x}");
        }
    }

    #[test]
    fn batch_equals_horner_exactly() {
        for (w, t, npts) in [(8u32, 2usize, 300usize), (16, 7, 513), (32, 6, 100), (64, 4, 64)]
        {
            let f = FieldSpec::with_default_poly(w).unwrap();
            let mut s = SeedStream::with_path(5, &[u64::from(w), t as u64]);
            let h = sample_kwise_hash(&f, &mut s, t).unwrap();
            let pts: Vec<u64> = (0..npts).map(|_| s.next_bits(w)).collect();
            let batch = h.eval_batch(&pts).unwrap();
            for (i, &x) in pts.iter().enumerate() {
                assert_eq!(batch[i], h.eval(x).unwrap(), "w={w} t={t} i={i}");
            }
        }
    }

    #[test]
    fn batch_handles_degenerate_shapes() {
        let f = FieldSpec::with_default_poly(8).unwrap();
        let h = sample_kwise_hash(&f, &mut stream(), 1).unwrap();
        // t=1: constant polynomial, groups of one point.
        let pts = [3u64, 3, 9];
        let vals = h.eval_batch(&pts).unwrap();
        assert!(vals.iter().all(|&v| v == h.coeffs()[0]));
        assert!(h.eval_batch(&[]).unwrap().is_empty());
        // duplicated points inside one group still evaluate correctly
        let h3 = sample_kwise_hash(&f, &mut stream(), 3).unwrap();
        let dup = [7u64, 7, 7];
        let got = h3.eval_batch(&dup).unwrap();
        for &v in &got {
            assert_eq!(v, h3.eval(7).unwrap());
        }
    }

    #[test]
    fn pairwise_w8_joint_distribution_is_uniform() {
        // For t=2, w=8: over all 2^16 coefficient pairs, (h(a), h(b)) for
        // fixed a != b hits every value pair exactly once.
        let f = FieldSpec::with_default_poly(8).unwrap();
        let (a, b) = (3u64, 200u64);
        let mut counts = vec![0u32; 1 << 16];
        for c0 in 0..256u64 {
            for c1 in 0..256u64 {
                let h = KWiseHash::from_coeffs(&f, vec![c0, c1]).unwrap();
                let (ha, hb) = (h.eval(a).unwrap(), h.eval(b).unwrap());
                counts[((ha << 8) | hb) as usize] += 1;
            }
        }
        assert!(counts.iter().all(|&c| c == 1));
    }

    #[test]
    fn from_coeffs_validates_width() {
        let f = FieldSpec::with_default_poly(8).unwrap();
        assert!(KWiseHash::from_coeffs(&f, vec![0x100]).is_err());
        assert!(KWiseHash::from_coeffs(&f, vec![]).is_err());
    }
}
