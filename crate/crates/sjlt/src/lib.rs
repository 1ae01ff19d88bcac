//! Sparse random projections that preserve Euclidean geometry.
//!
//! The crate builds k x d sign matrices with s << k nonzero entries per
//! column, so applying one to a vector costs O(s * nnz) instead of
//! O(k * nnz). Despite the sparsity, the embeddings satisfy the usual
//! distributional guarantee: for any unit vector x, |Sx| concentrates around
//! 1 with failure probability below delta once k and s are sized for the
//! target distortion eps.
//!
//! The pieces:
//!
//! - [`params`]: turns (eps, delta) requirements into concrete (k, s) and the
//!   hash independence t needed to back the guarantee.
//! - [`kwise`]: the randomness substrate. Seeded, replayable bit streams and
//!   t-wise independent hash families built from polynomials over GF(2^w).
//! - [`sketch`]: the sampler families (block, graph, replicated-coordinate,
//!   dense reference) plus code-derived deterministic column supports,
//!   turnstile updates, and binary serialization.
//! - [`codes`]: error-correcting code scaffolding (Reed-Solomon style
//!   evaluation codes and random codes) whose minimum distance certifies
//!   collision structure for the code-based sketches.
//! - [`analysis`]: empirical verification. Distortion/failure estimation with
//!   Wilson confidence bounds, moment estimation, the collision quadratic
//!   form with its operator/Frobenius norms, and sparsity lower-bound
//!   experiments.
//! - [`linalg`]: sketched applications. Approximate Gram products, streaming
//!   least squares, and streaming covariance summaries.
//!
//! All sampling is deterministic given a master seed; independent components
//! draw from labeled child streams so results replay bit-for-bit across runs
//! and thread counts.

pub mod analysis;
pub mod codes;
pub mod error;
pub mod kwise;
pub mod linalg;
pub mod params;
pub mod sketch;

pub use error::{Error, Result};
pub use params::JlParams;
pub use sketch::{ConstructionTag, SparseSketch, TurnstileUpdate};
