//! Independent reference implementations used to cross-check the library in
//! integration tests. Everything here is deliberately written with different
//! algorithms than the crate under test: bit-serial field arithmetic instead
//! of tables or clmul, Jacobi rotations instead of power iteration, normal
//! equations instead of Householder QR, and a separate RNG.

#![allow(dead_code)] // each integration test pulls a different subset

/// xorshift64*; unrelated to the library's seed streams.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Standard normal via Box-Muller.
    pub fn gaussian(&mut self) -> f64 {
        let u = self.uniform().max(1e-300);
        let v = self.uniform();
        (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
    }

    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        // acceptably small modulo bias for test-sized n
        self.next_u64() % n
    }
}

pub fn random_unit_vector(rng: &mut TestRng, d: usize) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..d).map(|_| rng.gaussian()).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return x.iter().map(|v| v / norm).collect();
        }
    }
}

/// Bit-serial multiplication in GF(2^w) mod `poly` (which includes the x^w
/// term). Schoolbook shift-and-add with per-step reduction.
pub fn gf_mul_reference(mut a: u64, mut b: u64, w: u32, poly: u128) -> u64 {
    let high = 1u128 << w;
    let mut acc = 0u128;
    let mut aa = a as u128;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= aa;
        }
        b >>= 1;
        aa <<= 1;
        if aa & high != 0 {
            aa ^= poly;
        }
    }
    // acc already stays below 2^w because aa is reduced every step
    a = acc as u64;
    a
}

/// Multiplicative inverse by extended Euclid over GF(2)[x].
pub fn gf_inv_reference(a: u64, w: u32, poly: u128) -> u64 {
    assert!(a != 0, "zero has no inverse");
    let (mut r0, mut r1) = (poly, a as u128);
    let (mut t0, mut t1) = (0u128, 1u128);
    while r1 != 0 {
        let (q, r) = poly_divmod(r0, r1);
        r0 = r1;
        r1 = r;
        let t = t0 ^ clmul_u128(q, t1);
        t0 = t1;
        t1 = t;
    }
    assert_eq!(r0, 1, "modulus must be irreducible");
    debug_assert!(t0 < (1u128 << w));
    t0 as u64
}

fn degree(p: u128) -> i32 {
    127 - p.leading_zeros() as i32
}

fn poly_divmod(mut num: u128, den: u128) -> (u128, u128) {
    assert!(den != 0);
    let dd = degree(den);
    let mut q = 0u128;
    while num != 0 && degree(num) >= dd {
        let shift = (degree(num) - dd) as u32;
        q ^= 1u128 << shift;
        num ^= den << shift;
    }
    (q, num)
}

fn clmul_u128(a: u128, b: u128) -> u128 {
    let mut acc = 0u128;
    for i in 0..128 {
        if (b >> i) & 1 == 1 {
            acc ^= a << i;
        }
    }
    acc
}

/// Largest-magnitude eigenvalue of a symmetric matrix by cyclic Jacobi
/// rotations. Exact enough for d <= 64 cross-checks.
pub fn symmetric_operator_norm(mat: &[Vec<f64>]) -> f64 {
    let n = mat.len();
    let mut a: Vec<Vec<f64>> = mat.to_vec();
    for row in &a {
        assert_eq!(row.len(), n, "matrix must be square");
    }
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p][q] * a[p][q];
            }
        }
        if off.sqrt() < 1e-13 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = 0.5 * (a[q][q] - a[p][p]) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[i][p];
                    let aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let api = a[p][i];
                    let aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i].abs()).fold(0.0, f64::max)
}

/// Exact least squares min |Ax - b| through the normal equations with
/// partial-pivot Gaussian elimination. Fine for the small, well-conditioned
/// systems the tests use.
pub fn least_squares_reference(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let m = a.len();
    let n = a[0].len();
    assert!(m >= n && b.len() == m);
    // G = A'A, c = A'b
    let mut g = vec![vec![0.0f64; n + 1]; n];
    for i in 0..n {
        for j in 0..n {
            g[i][j] = (0..m).map(|r| a[r][i] * a[r][j]).sum();
        }
        g[i][n] = (0..m).map(|r| a[r][i] * b[r]).sum();
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| g[x][col].abs().partial_cmp(&g[y][col].abs()).unwrap())
            .unwrap();
        g.swap(col, pivot);
        assert!(g[col][col].abs() > 1e-12, "singular normal equations");
        for row in (col + 1)..n {
            let f = g[row][col] / g[col][col];
            for j in col..=n {
                g[row][j] -= f * g[col][j];
            }
        }
    }
    let mut x = vec![0.0f64; n];
    for col in (0..n).rev() {
        let mut v = g[col][n];
        for j in (col + 1)..n {
            v -= g[col][j] * x[j];
        }
        x[col] = v / g[col][col];
    }
    x
}

/// Naive polynomial evaluation over the field: explicit powers, no Horner.
pub fn poly_eval_reference(coeffs: &[u64], x: u64, w: u32, poly: u128) -> u64 {
    let mut acc = 0u64;
    let mut xp = 1u64; // x^0
    for &c in coeffs {
        if c != 0 {
            acc ^= gf_mul_reference(c, xp, w, poly);
        }
        xp = gf_mul_reference(xp, x, w, poly);
    }
    acc
}

pub fn frobenius_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let mut acc = 0.0;
    for (ra, rb) in a.iter().zip(b) {
        for (va, vb) in ra.iter().zip(rb) {
            acc += (va - vb) * (va - vb);
        }
    }
    acc.sqrt()
}
