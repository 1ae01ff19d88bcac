//! Derandomize the sketch supports with an error-correcting code.
//!
//! Instead of hashing each column to s random rows, fix the support of
//! column i to the i-th codeword of a code with large minimum distance:
//! two columns then collide in few rows by construction, not just in
//! expectation. Only the signs stay random. The example builds a
//! Reed-Solomon code, checks its distance, turns it into a sketch, and
//! shows what breaks when the code is damaged.
//!
//! Run with: cargo run --release --example code_sketch

use sjlt::codes::{check_code_for_params, degrade_code, min_distance, reed_solomon_code};
use sjlt::params::JlParams;
use sjlt::sketch::sketch_from_code;

fn main() {
    // a q-ary Reed-Solomon code: q = 8 symbols, s = 8 positions,
    // degree < 2 message polynomials -> 64 codewords, distance s - 1 = 7
    let (q, s, m) = (8, 8, 2);
    let code = reed_solomon_code(q, s, m).expect("valid code shape");
    let dist = min_distance(&code).expect("distance computes");
    println!(
        "Reed-Solomon code: {} codewords of length {s} over {q} symbols, min distance {dist}",
        code.num_words()
    );

    // each codeword supports one column: block r of the sketch gets row
    // offset = symbol r of the codeword
    let d = code.num_words(); // one column per codeword
    let params = JlParams::from_dims_exact(d, s * q, s, 0.25, 0.05, 99).expect("valid params");
    assert!(
        check_code_for_params(&code, &params, 1.0).expect("check runs"),
        "distance is large enough for these sketch dimensions"
    );
    let sketch = sketch_from_code(&code, &params).expect("code matches params");
    println!(
        "code-driven sketch: d = {}, k = {}, exactly {} entries per column",
        sketch.d(),
        sketch.k(),
        sketch.s()
    );

    // any two columns share at most s - dist = 1 rows; verify by brute force
    let mut worst_overlap = 0;
    for i in 0..d {
        let (rows_i, _) = sketch.column(i);
        for j in (i + 1)..d {
            let (rows_j, _) = sketch.column(j);
            let overlap = rows_i.iter().filter(|r| rows_j.contains(r)).count();
            worst_overlap = worst_overlap.max(overlap);
        }
    }
    println!(
        "worst pairwise column overlap: {worst_overlap} rows (bound from distance: {})",
        s - dist
    );
    assert!(worst_overlap <= s - dist);

    // sketching still works: unit vectors stay near unit norm
    let x: Vec<f64> = (0..d).map(|_| 1.0 / (d as f64).sqrt()).collect();
    let y = sketch.apply(&x).expect("dims");
    let norm_sq: f64 = y.iter().map(|v| v * v).sum();
    println!("|Sx|^2 on the uniform unit vector: {norm_sq:.6}");

    // damage the code and the distance drops; the checker refuses it
    let bad = degrade_code(&code).expect("degrade runs");
    let bad_dist = min_distance(&bad).expect("distance computes");
    let accepted = check_code_for_params(&bad, &params, 1.0).expect("check runs");
    println!(
        "after pinning the first symbol of every word: min distance {bad_dist}, checker accepts: {accepted}"
    );
    assert!(!accepted, "the degraded code must be rejected");
}
