//! Measure how often a sketch violates its distortion contract.
//!
//! The contract: for a unit vector x, | |Sx|^2 - 1 | <= eps with
//! probability at least 1 - delta over the draw of the sketch. This
//! example estimates the failure rate on the vectors that stress the
//! construction hardest and reports a 95% Wilson upper confidence bound,
//! so a PASS is a statistical certificate rather than a lucky run.
//!
//! Run with: cargo run --release --example distortion_experiment

use sjlt::analysis::{estimate_failure, hard_vector, uniform_vector, VectorKind};
use sjlt::params::derive_params;
use sjlt::sketch::ConstructionTag;

fn main() {
    let (eps, delta) = (0.25, 0.05);
    let d = 1024;
    let params = derive_params(&[(eps, delta)], d, 2024, 8.0, 2.0).expect("valid parameters");
    println!(
        "contract: | |Sx|^2 - 1 | <= {eps} with probability >= {:.2}",
        1.0 - delta
    );
    println!(
        "sketch: d = {d}, k = {}, s = {} (t = {}-wise hashes)\n",
        params.k,
        params.s,
        params.t()
    );

    // the stress vectors: spread mass (uniform), all mass on one
    // coordinate (basis), and mass split across two coordinates, which
    // maximizes the variance contributed by column collisions
    let vectors = [
        (uniform_vector(d).expect("vector"), "uniform"),
        (
            hard_vector(VectorKind::Basis, params.s, eps, d).expect("vector"),
            "basis",
        ),
        (
            hard_vector(VectorKind::TwoCoord, params.s, eps, d).expect("vector"),
            "two_coord",
        ),
    ];

    let trials = 4000;
    println!("{trials} independent sketch draws per cell:");
    println!("{:<8} {:<10} {:>9} {:>14} verdict", "family", "vector", "failures", "wilson upper");
    for tag in [ConstructionTag::Block, ConstructionTag::Graph] {
        for (x, name) in &vectors {
            let report =
                estimate_failure(tag, &params, x, name, eps, trials).expect("experiment runs");
            let ok = report.wilson_upper_95 <= delta;
            println!(
                "{:<8} {:<10} {:>4}/{:<4} {:>14.5} {}",
                tag.as_str(),
                name,
                report.failures,
                report.trials,
                report.wilson_upper_95,
                if ok { "within delta" } else { "VIOLATION" }
            );
            assert!(ok, "{tag}/{name} must satisfy the contract at these sizes");
        }
    }

    println!("\nall cells certify the contract at the 95% confidence level");
}
