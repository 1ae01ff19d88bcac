//! Approximate a matrix product through a shared sketch.
//!
//! For tall matrices A (d x n) and B (d x m), the product A' B costs
//! n*m*d multiplications. Sketching both down to k rows first costs
//! s*d*(n+m) + n*m*k, and (SA)'(SB) estimates A'B with Frobenius error
//! controlled by eps when the sketch satisfies its moment contract.
//!
//! Run with: cargo run --release --example matrix_product

use sjlt::linalg::{approx_matrix_product, exact_matrix_product, MatrixBuffer};
use sjlt::params::derive_params;
use sjlt::sketch::{sample_sketch, ConstructionTag};

// a tiny deterministic generator so the demo data is reproducible
struct Rng(u64);
impl Rng {
    fn next(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }
}

fn main() {
    let (d, n, m) = (20_000, 6, 4);
    let mut rng = Rng(0xABCD_EF01);

    // unit-Frobenius factors so the additive error bound reads directly
    let mut a = MatrixBuffer::zeros(d, n).expect("shape");
    let mut b = MatrixBuffer::zeros(d, m).expect("shape");
    for j in 0..n {
        for i in 0..d {
            a.set(i, j, rng.next());
        }
    }
    for j in 0..m {
        for i in 0..d {
            b.set(i, j, rng.next());
        }
    }
    let (fa, fb) = (a.frobenius_norm(), b.frobenius_norm());
    for i in 0..d {
        for j in 0..n {
            a.set(i, j, a.get(i, j) / fa);
        }
        for j in 0..m {
            b.set(i, j, b.get(i, j) / fb);
        }
    }

    let exact = exact_matrix_product(&a, &b).expect("dims agree");

    let (eps, delta) = (0.25, 0.1);
    let params = derive_params(&[(eps, delta)], d, 314, 8.0, 2.0).expect("params");
    println!(
        "A is {d} x {n}, B is {d} x {m}; sketching both to k = {} rows (s = {})",
        params.k, params.s
    );
    println!(
        "stored rows per matrix: {d} -> {} ({}x compression); later products run on the sketches",
        params.k,
        d / params.k
    );

    let sketch = sample_sketch(ConstructionTag::Block, &params).expect("sampling succeeds");
    let approx = approx_matrix_product(&sketch, &a, &b).expect("dims agree");

    let mut err_sq = 0.0;
    let mut exact_sq = 0.0;
    for i in 0..n {
        for j in 0..m {
            let diff = approx.get(i, j) - exact.get(i, j);
            err_sq += diff * diff;
            exact_sq += exact.get(i, j) * exact.get(i, j);
        }
    }
    println!(
        "|approx - exact|_F = {:.5} against the eps * |A|_F * |B|_F = {eps} budget",
        err_sq.sqrt()
    );
    println!("(|A'B|_F itself is {:.5})", exact_sq.sqrt());
    assert!(err_sq.sqrt() <= eps, "this seed should land inside the budget");

    // a corner of the two products, side by side
    println!("\nentry-by-entry, first 2 x 2 corner:");
    for i in 0..2 {
        for j in 0..2 {
            println!(
                "  (A'B)[{i}][{j}] = {:+.6}   sketched = {:+.6}",
                exact.get(i, j),
                approx.get(i, j)
            );
        }
    }
}
