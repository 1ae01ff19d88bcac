//! Show that the sparsity the sizing rule picks is actually necessary.
//!
//! Cutting the per-column sparsity s below its derived value makes the
//! sketch fail its distortion contract on an adversarial vector that
//! concentrates mass where column collisions hurt the most. The same
//! experiment at the full sparsity stays healthy, so the failure is
//! caused by under-sparsity, not by the vector.
//!
//! Run with: cargo run --release --example sparsity_lower_bound

use sjlt::analysis::{lower_bound_experiment, LowerBoundConfig};
use sjlt::params::derive_params;
use sjlt::sketch::ConstructionTag;

fn main() {
    let (eps, delta) = (0.25, 0.05);
    let trials = 20_000;

    let derived = derive_params(&[(eps, delta)], 1024, 1, 8.0, 2.0).expect("params");
    println!(
        "at (eps = {eps}, delta = {delta}) the sizing rule asks for s = {}",
        derived.s
    );

    // starve the sketch: s = 2 with a row budget scaled to match. The
    // adversarial vector spreads its mass over floor(1/(s*eps)) = 2
    // coordinates; a single double-collision then shifts |Sx|^2 past eps.
    let mut starved =
        LowerBoundConfig::new(ConstructionTag::Block, eps, delta, 2, trials, 77);
    starved.c_k = 0.5; // k = 64 rows: 32-row blocks, the regime where s=2 cracks
    let r = lower_bound_experiment(&starved).expect("experiment runs");
    println!(
        "\ns = 2 (k sized to {} rows), vector '{}': {} / {} failures, rate {:.4}",
        64, r.vector_tag, r.failures, r.trials, r.rate
    );
    println!("  -> failure rate {:.4} is ABOVE delta = {delta}: contract broken", r.rate);
    assert!(r.rate > delta);

    // the replicated-coordinate construction needs even more sparsity:
    // at its own tight budget s = 5 for (0.1, 0.01) it fails visibly
    let dks = LowerBoundConfig::new(ConstructionTag::Dks, 0.1, 0.01, 5, trials, 78);
    let r2 = lower_bound_experiment(&dks).expect("experiment runs");
    println!(
        "\nreplicated-hash construction, s = 5 at (0.1, 0.01): rate {:.4} >= 2 * delta = 0.02",
        r2.rate
    );
    assert!(r2.rate >= 0.02);

    // control: the full derived sparsity on the same adversarial family
    let mut full =
        LowerBoundConfig::new(ConstructionTag::Block, eps, delta, derived.s, trials, 79);
    full.c_k = 0.5;
    let r3 = lower_bound_experiment(&full).expect("experiment runs");
    println!(
        "\ncontrol at full s = {}: rate {:.5} stays below delta = {delta}",
        derived.s, r3.rate
    );
    assert!(r3.rate <= delta);

    println!("\nconclusion: the derived sparsity is not slack in these regimes");
}
