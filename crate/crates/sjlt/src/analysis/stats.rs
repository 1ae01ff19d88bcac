//! Small statistics utilities plus the deterministic trial runner.

use std::sync::atomic::{AtomicUsize, Ordering};

/// 97.5th percentile of the standard normal, for two-sided 95% intervals.
const Z_95: f64 = 1.959963984540054;

/// Upper end of the Wilson score 95% interval for a binomial proportion.
/// Conservative for small counts and never exceeds 1.
pub fn wilson_upper_95(failures: u64, trials: u64) -> f64 {
    assert!(trials > 0, "wilson bound needs at least one trial");
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let radius = Z_95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center + radius) / denom).min(1.0)
}

/// Sample mean and standard error of the mean.
pub fn mean_and_se(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    assert!(n >= 2.0, "need at least two samples");
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

static THREADS: AtomicUsize = AtomicUsize::new(1);

/// Sets the worker count used by the trial runner. Results are identical for
/// every thread count; this only trades wall-clock time.
pub fn set_threads(n: usize) {
    THREADS.store(n.max(1), Ordering::Relaxed);
}

pub fn threads() -> usize {
    THREADS.load(Ordering::Relaxed)
}

/// Evaluates `f(trial)` for trial in 0..trials into an indexed buffer.
/// Trials are split into contiguous chunks across threads and every result
/// lands at its own index, so the output is independent of scheduling.
pub(crate) fn run_trials<F>(trials: u64, f: F) -> Vec<f64>
where
    F: Fn(u64) -> f64 + Sync,
{
    let n = usize::try_from(trials).expect("trial count fits usize");
    let mut out = vec![0.0f64; n];
    let workers = threads().min(n.max(1));
    if workers <= 1 {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = f(i as u64);
        }
        return out;
    }
    let chunk = n.div_ceil(workers);
    std::thread::scope(|scope| {
        for (w, slice) in out.chunks_mut(chunk).enumerate() {
            let f = &f;
            let base = (w * chunk) as u64;
            scope.spawn(move || {
                for (off, slot) in slice.iter_mut().enumerate() {
                    *slot = f(base + off as u64);
                }
            });
        }
    });
    out
}
