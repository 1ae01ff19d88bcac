//! Maintain a sketch of a vector that arrives as a stream of updates.
//!
//! The sketch is linear, so S(x + delta) = Sx + S(delta): each update
//! (index, value) touches exactly s of the k counters. The example feeds
//! the same vector once directly and once as a stream. Replaying one
//! update per coordinate in index order reproduces the direct result bit
//! for bit; a shuffled stream with cancellations agrees up to float
//! roundoff, exactly as reordering any floating-point sum would.
//!
//! Run with: cargo run --release --example streaming_updates

use sjlt::params::JlParams;
use sjlt::sketch::{sample_sketch, ConstructionTag, TurnstileUpdate};

fn main() {
    let d = 1000;
    let params = JlParams::derive(0.2, 0.05, d, 7).expect("valid parameters");
    let sketch = sample_sketch(ConstructionTag::Graph, &params).expect("sampling succeeds");
    println!(
        "graph sketch: k = {}, s = {} -> each update touches {} counters",
        sketch.k(),
        sketch.s(),
        sketch.s()
    );

    // the target vector: a few spikes on an otherwise smooth profile
    let mut x = vec![0.0; d];
    for (i, xi) in x.iter_mut().enumerate() {
        *xi = (i as f64 / 100.0).cos() * 0.01;
    }
    x[17] = 3.0;
    x[402] = -1.5;

    // reference: apply to the complete vector in one shot
    let direct = sketch.apply(&x).expect("dims");

    // replay 1: one update per coordinate, in index order -- this walks
    // the exact accumulation order of apply(), so it is bit-identical
    let mut ordered = vec![0.0; sketch.k()];
    for (index, &value) in x.iter().enumerate() {
        sketch
            .apply_update(&mut ordered, &TurnstileUpdate { index, value })
            .expect("index in range");
    }
    let identical = direct
        .iter()
        .zip(&ordered)
        .all(|(a, b)| a.to_bits() == b.to_bits());
    println!("in-order replay of {d} updates == direct sketch, bit for bit: {identical}");
    assert!(identical);

    // replay 2: the same vector as a shuffled turnstile stream, with one
    // coordinate arriving as an insert plus a correction
    let mut updates = Vec::new();
    for (i, &xi) in x.iter().enumerate() {
        if i == 17 {
            // arrives as 5.0 followed by a -2.0 correction
            updates.push(TurnstileUpdate { index: i, value: 5.0 });
            updates.push(TurnstileUpdate { index: i, value: -2.0 });
        } else if xi != 0.0 {
            updates.push(TurnstileUpdate { index: i, value: xi });
        }
    }
    // a deterministic shuffle so arrival order differs from index order
    let mut state = 0x9E3779B97F4A7C15u64;
    for i in (1..updates.len()).rev() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        updates.swap(i, (state % (i as u64 + 1)) as usize);
    }
    let mut streamed = vec![0.0; sketch.k()];
    for u in &updates {
        sketch.apply_update(&mut streamed, u).expect("index in range");
    }
    let worst_gap = direct
        .iter()
        .zip(&streamed)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    println!(
        "shuffled replay of {} updates (with a cancellation): max deviation {worst_gap:.2e}",
        updates.len()
    );
    assert!(worst_gap < 1e-12, "reordering only moves float roundoff");

    // the sketch still knows the norm
    let norm_sq: f64 = streamed.iter().map(|v| v * v).sum();
    let true_norm_sq: f64 = x.iter().map(|v| v * v).sum();
    println!(
        "|x|^2 = {true_norm_sq:.4}, sketched estimate = {norm_sq:.4} (ratio {:.4})",
        norm_sq / true_norm_sq
    );
}
