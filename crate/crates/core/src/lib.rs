//! Sparse naive Bayes training for feature selection.
//!
//! The crate fits Bernoulli and multinomial naive Bayes models under a
//! cardinality constraint on `theta_plus - theta_minus`. The Bernoulli case
//! has an exact closed form ([`bernoulli::fit_sparse_bernoulli`]). The
//! multinomial case is handled through a one-dimensional convex relaxation
//! ([`multinomial::smnb_bound`]) that yields an upper bound, a primal feasible
//! model and a duality-gap certificate.
//!
//! Everything is computed from the per-class sufficient statistics in
//! [`ClassSummary`], built once from a sparse dataset by [`summarize`].

pub mod baselines;
pub mod bernoulli;
pub mod data;
mod error;
pub mod experiments;
pub mod io;
pub mod multinomial;
pub mod primalization;
mod scalar;
mod topk;

pub use bernoulli::{BernoulliModel, SbnbScore};
pub use data::{binarize, summarize, ClassSummary, Label, LabeledDataset, SparseCountMatrix};
pub use error::{Error, Result};
pub use multinomial::{MultinomialModel, SmnbRelaxation};
pub use primalization::{LpSolution, SkCertificate};
pub use topk::{top_k_indices, topk_sum};

/// `a * ln(a / b)` with the convention `0 * ln(0 / b) = 0`.
#[inline]
pub(crate) fn xlog_ratio(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * (a / b).ln()
    }
}

/// `a * ln(a)` with `0 * ln 0 = 0`.
#[inline]
pub(crate) fn xlogx(a: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * a.ln()
    }
}

/// `a * ln(b)` with `0 * ln(anything) = 0`.
#[inline]
pub(crate) fn xlogy(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * b.ln()
    }
}
