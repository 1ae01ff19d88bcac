//! Solve a least-squares problem from a stream, without storing the data.
//!
//! The solver keeps only the k x n sketched design matrix and the k-entry
//! sketched right-hand side. Rows, columns, or single cells may arrive in
//! any order as (row, col, value) updates; solving at the end costs a QR
//! factorization of the small sketched system. The answer is compared to
//! the exact least-squares solution computed from the full data.
//!
//! Run with: cargo run --release --example regression

use sjlt::linalg::{least_squares, regression_init, regression_solve, regression_update, MatrixBuffer, RegressionUpdate};
use sjlt::params::derive_params;

struct Rng(u64);
impl Rng {
    fn gaussian(&mut self) -> f64 {
        // sum of 12 uniforms, a classic cheap approximation
        let mut acc = 0.0;
        for _ in 0..12 {
            self.0 ^= self.0 << 13;
            self.0 ^= self.0 >> 7;
            self.0 ^= self.0 << 17;
            acc += (self.0 >> 11) as f64 / (1u64 << 53) as f64;
        }
        acc - 6.0
    }
}

fn main() {
    let (d, n) = (5000, 4); // 5000 observations, 4 coefficients
    let mut rng = Rng(42);

    // ground truth: y = 2.0*f0 - 1.0*f1 + 0.5*f2 + 0.0*f3 + noise
    let truth = [2.0, -1.0, 0.5, 0.0];
    let mut design = MatrixBuffer::zeros(d, n).expect("shape");
    let mut rhs = vec![0.0; d];
    for i in 0..d {
        let mut y = 0.2 * rng.gaussian(); // noise
        for j in 0..n {
            let v = rng.gaussian();
            design.set(i, j, v);
            y += truth[j] * v;
        }
        rhs[i] = y;
    }

    // exact solution for reference (requires the full 5000 x 4 matrix)
    let x_exact = least_squares(&design, &rhs).expect("full rank");

    // streamed solution: derive a sketch, then feed every cell as an update
    let params = derive_params(&[(0.3, 0.1)], d, 7, 8.0, 2.0).expect("params");
    let mut state = regression_init(&params, n).expect("k >= n");
    println!(
        "streaming {} design cells + {} rhs entries into a {} x {} sketched system ({}x fewer rows)",
        d * n,
        d,
        params.k,
        n,
        d / params.k
    );
    for i in 0..d {
        for j in 0..n {
            regression_update(
                &mut state,
                &RegressionUpdate::Design { row: i, col: j, value: design.get(i, j) },
            )
            .expect("in range");
        }
        regression_update(&mut state, &RegressionUpdate::Rhs { row: i, value: rhs[i] })
            .expect("in range");
    }
    let (x_sketched, sketched_residual) = regression_solve(&state).expect("solvable");

    println!("\n{:>12} {:>12} {:>12}", "truth", "exact", "sketched");
    for j in 0..n {
        println!("{:>12.6} {:>12.6} {:>12.6}", truth[j], x_exact[j], x_sketched[j]);
    }

    // compare quality where it counts: residual on the original data
    let residual = |x: &[f64]| -> f64 {
        let mut acc = 0.0;
        for i in 0..d {
            let fit: f64 = (0..n).map(|j| design.get(i, j) * x[j]).sum();
            acc += (fit - rhs[i]) * (fit - rhs[i]);
        }
        acc.sqrt()
    };
    let r_exact = residual(&x_exact);
    let r_sketched = residual(&x_sketched);
    println!("\nresidual of exact solution:    {r_exact:.4}");
    println!("residual of sketched solution: {r_sketched:.4} ({:.4}x optimal)", r_sketched / r_exact);
    println!("residual inside the sketch:    {sketched_residual:.4}");
    assert!(r_sketched <= 1.3 * r_exact, "sketched answer should be near-optimal");
}
