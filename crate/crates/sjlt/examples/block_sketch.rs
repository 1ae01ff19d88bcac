//! Build a sparse sketch and watch it preserve the norm of a vector.
//!
//! A sketch is a k x d matrix with exactly s nonzero entries per column,
//! each +-1/sqrt(s). Applying it costs s operations per input coordinate
//! instead of k, yet the squared norm of the output concentrates around
//! the squared norm of the input.
//!
//! Run with: cargo run --release --example block_sketch

use sjlt::analysis::uniform_vector;
use sjlt::params::JlParams;
use sjlt::sketch::{sample_sketch, ConstructionTag};

fn main() {
    // Target accuracy: distortion eps with failure probability delta.
    let (eps, delta) = (0.25, 0.05);
    let d = 4096; // input dimension

    // derive sizes a sketch needs for this accuracy: k rows, s nonzeros
    // per column, and the polynomial hash independence t
    let params = JlParams::derive(eps, delta, d, 42).expect("valid parameters");
    println!(
        "d = {} -> k = {} rows, s = {} nonzeros per column (t = {}-wise hashing)",
        params.d,
        params.k,
        params.s,
        params.t()
    );
    println!(
        "dense multiply: {} ops per vector; sparse: {} ops ({}x cheaper)",
        params.k * params.d,
        params.s * params.d,
        params.k / params.s
    );

    // sample the sketch; the seed fixes it completely
    let sketch = sample_sketch(ConstructionTag::Block, &params).expect("sampling succeeds");
    println!(
        "sampled a {} sketch: {} stored entries, seeded from {} hash bits",
        sketch.tag(),
        sketch.nnz(),
        sketch.seed_bits()
    );

    // embed a unit vector and look at the distortion
    let x = uniform_vector(d).expect("unit vector");
    let y = sketch.apply(&x).expect("dimensions match");
    let norm_sq: f64 = y.iter().map(|v| v * v).sum();
    println!("|x|^2 = 1 (by construction)");
    println!("|Sx|^2 = {norm_sq:.6}  (distortion {:+.4})", norm_sq - 1.0);
    assert!(
        (norm_sq - 1.0).abs() < eps,
        "this seed should land well inside the eps = {eps} contract"
    );

    // distances between pairs are preserved the same way: sketch both
    // points and compare in the small space
    let mut p = vec![0.0; d];
    let mut q = vec![0.0; d];
    for i in 0..d {
        p[i] = (i as f64 * 0.37).sin() / (d as f64).sqrt();
        q[i] = (i as f64 * 0.37).sin() / (d as f64).sqrt() + if i < 16 { 0.25 } else { 0.0 };
    }
    let true_dist_sq: f64 = p.iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum();
    let sp = sketch.apply(&p).expect("dims");
    let sq = sketch.apply(&q).expect("dims");
    let sketched_dist_sq: f64 = sp.iter().zip(&sq).map(|(a, b)| (a - b) * (a - b)).sum();
    println!(
        "pair distance: true |p-q|^2 = {true_dist_sq:.6}, sketched = {sketched_dist_sq:.6} (ratio {:.4})",
        sketched_dist_sq / true_dist_sq
    );
}
