//! Distortion analysis: quadratic error forms, norm bounds, and Monte-Carlo
//! verification of tail and moment behavior.

mod experiment;
mod quad;
mod stats;

pub use experiment::{
    distortion, estimate_failure, estimate_moment, hard_vector, lower_bound_experiment,
    norm_sq_samples, spread_width, uniform_vector, FailureReport, LowerBoundConfig, VectorKind,
};
pub use quad::{build_quadratic_form, QuadraticForm};
pub use stats::{mean_and_se, set_threads, threads, wilson_upper_95};
