//! Shared inputs for the criterion benchmarks.

use sparsenb::experiments::synthetic_summary;
use sparsenb::ClassSummary;

/// Synthetic summary of `m` features with count-like magnitudes.
pub fn count_summary(m: usize, seed: u64) -> ClassSummary {
    let s = synthetic_summary(m, seed).expect("synthetic summary");
    let scale = 10.0 * m as f64;
    ClassSummary::new(
        s.f_plus().iter().map(|f| (f * scale).round()).collect(),
        s.f_minus().iter().map(|f| (f * scale).round()).collect(),
        m,
        m,
    )
    .expect("valid summary")
}
