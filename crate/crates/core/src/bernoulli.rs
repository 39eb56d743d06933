//! Bernoulli naive Bayes: the classical fit, the exact cardinality-constrained
//! fit, and the induced linear decision rule.
//!
//! With `g = f_plus + f_minus` and `n = n_plus + n_minus`, pooling feature `j`
//! (forcing `theta_plus[j] = theta_minus[j]`) is worth `v[j]`, the best
//! Bernoulli log-likelihood of `g[j]` successes in `n` trials, while leaving it
//! free is worth `w[j]`, the sum of the two per-class optima. The constrained
//! problem is then separable: keep free the `k` features with the largest
//! `w - v` and pool the rest.

use crate::data::{ClassSummary, Label, SparseCountMatrix};
use crate::{top_k_indices, topk_sum, xlog_ratio, Error, Result};

/// Fitted Bernoulli model and its linear rule `sign(bias + weights . x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliModel {
    theta_plus: Vec<f64>,
    theta_minus: Vec<f64>,
    log_prior_ratio: f64,
    selected: Vec<usize>,
    gamma: f64,
    bias: f64,
    weights: Vec<f64>,
}

impl BernoulliModel {
    /// Builds a model from its parameters and derives the decision rule.
    /// Features with `theta_plus[j] == theta_minus[j]` get a weight of exactly
    /// zero.
    pub fn from_parameters(
        theta_plus: Vec<f64>,
        theta_minus: Vec<f64>,
        log_prior_ratio: f64,
        selected: Vec<usize>,
        gamma: f64,
    ) -> Result<Self> {
        if theta_plus.len() != theta_minus.len() {
            return Err(Error::dims("bernoulli", theta_plus.len(), theta_minus.len()));
        }
        if let Some(t) = theta_plus
            .iter()
            .chain(&theta_minus)
            .find(|t| !(0.0..=1.0).contains(*t))
        {
            return Err(Error::InvalidData(format!(
                "bernoulli parameter {t} outside [0, 1]"
            )));
        }
        let m = theta_plus.len();
        if let Some(&j) = selected.iter().find(|&&j| j >= m) {
            return Err(Error::InvalidData(format!(
                "selected feature {j} out of range for m = {m}"
            )));
        }
        let mut bias = log_prior_ratio;
        let mut weights = vec![0.0; m];
        for j in 0..m {
            let (p, q) = (theta_plus[j], theta_minus[j]);
            if p == q {
                continue;
            }
            bias += (1.0 - p).ln() - (1.0 - q).ln();
            weights[j] = (p.ln() + (1.0 - q).ln()) - (q.ln() + (1.0 - p).ln());
        }
        Ok(Self {
            theta_plus,
            theta_minus,
            log_prior_ratio,
            selected,
            gamma,
            bias,
            weights,
        })
    }

    pub fn m(&self) -> usize {
        self.theta_plus.len()
    }

    pub fn theta_plus(&self) -> &[f64] {
        &self.theta_plus
    }

    pub fn theta_minus(&self) -> &[f64] {
        &self.theta_minus
    }

    pub fn log_prior_ratio(&self) -> f64 {
        self.log_prior_ratio
    }

    /// Features allowed to differ between the classes, ascending.
    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Log-likelihood of the (smoothed) summary under this model.
    pub fn log_likelihood(&self, s: &ClassSummary) -> Result<f64> {
        if s.m() != self.m() {
            return Err(Error::dims("bernoulli", self.m(), s.m()));
        }
        Ok(bernoulli_log_likelihood(
            s,
            self.gamma,
            &self.theta_plus,
            &self.theta_minus,
        ))
    }

    /// `bias + weights . x` for each row; stored entries count as presence.
    pub fn decision_function(&self, x: &SparseCountMatrix) -> Result<Vec<f64>> {
        if x.n_cols() != self.m() {
            return Err(Error::dims("bernoulli", self.m(), x.n_cols()));
        }
        Ok(x.rows()
            .map(|(cols, vals)| {
                self.bias
                    + cols
                        .iter()
                        .zip(vals)
                        .filter(|(_, &v)| v > 0.0)
                        .map(|(&c, _)| self.weights[c])
                        .sum::<f64>()
            })
            .collect())
    }
}

/// Per-feature pooled (`v`) and split (`w`) log-likelihood contributions.
#[derive(Debug, Clone, PartialEq)]
pub struct SbnbScore {
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    /// `w - v`, non-negative up to rounding.
    pub diff: Vec<f64>,
}

/// Result of [`fit_sparse_bernoulli`].
#[derive(Debug, Clone, PartialEq)]
pub struct SparseBernoulliFit {
    pub model: BernoulliModel,
    pub score: SbnbScore,
    /// Optimal log-likelihood `1'v + s_k(w - v)`.
    pub objective: f64,
}

struct Smoothed {
    f_plus: Vec<f64>,
    f_minus: Vec<f64>,
    n_plus: f64,
    n_minus: f64,
}

fn smoothed_counts(s: &ClassSummary, gamma: f64) -> Result<Smoothed> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidSmoothing {
            module: "bernoulli",
            gamma,
        });
    }
    for (class_sums, class_size) in [(s.f_plus(), s.n_plus()), (s.f_minus(), s.n_minus())] {
        if let Some((feature, &count)) = class_sums
            .iter()
            .enumerate()
            .find(|(_, &f)| f > class_size as f64)
        {
            return Err(Error::NonBinarySummary {
                feature,
                count,
                class_size,
            });
        }
    }
    Ok(Smoothed {
        f_plus: s.f_plus().iter().map(|f| f + gamma).collect(),
        f_minus: s.f_minus().iter().map(|f| f + gamma).collect(),
        n_plus: s.n_plus() as f64 + 2.0 * gamma,
        n_minus: s.n_minus() as f64 + 2.0 * gamma,
    })
}

/// Best log-likelihood of `successes` out of `trials` Bernoulli draws.
fn binary_entropy_term(successes: f64, trials: f64) -> f64 {
    xlog_ratio(successes, trials) + xlog_ratio(trials - successes, trials)
}

/// Bernoulli log-likelihood of a summary smoothed by `gamma`:
/// `f+ . ln t+ + (n+ - f+) . ln(1 - t+)` plus the same for the negative class.
pub fn bernoulli_log_likelihood(
    s: &ClassSummary,
    gamma: f64,
    theta_plus: &[f64],
    theta_minus: &[f64],
) -> f64 {
    let term = |f: f64, n: f64, t: f64| {
        let a = if f == 0.0 { 0.0 } else { f * t.ln() };
        let b = if n - f == 0.0 { 0.0 } else { (n - f) * (1.0 - t).ln() };
        a + b
    };
    let np = s.n_plus() as f64 + 2.0 * gamma;
    let nm = s.n_minus() as f64 + 2.0 * gamma;
    (0..s.m())
        .map(|j| {
            term(s.f_plus()[j] + gamma, np, theta_plus[j])
                + term(s.f_minus()[j] + gamma, nm, theta_minus[j])
        })
        .sum()
}

/// Classical fit: `theta_pm = (f_pm + gamma) / (n_pm + 2 gamma)`.
pub fn fit_bernoulli_mle(s: &ClassSummary, gamma: f64) -> Result<BernoulliModel> {
    let c = smoothed_counts(s, gamma)?;
    let theta_plus = c.f_plus.iter().map(|f| f / c.n_plus).collect();
    let theta_minus = c.f_minus.iter().map(|f| f / c.n_minus).collect();
    BernoulliModel::from_parameters(
        theta_plus,
        theta_minus,
        s.log_prior_ratio(),
        (0..s.m()).collect(),
        gamma,
    )
}

/// Exact maximum-likelihood Bernoulli fit with at most `k` features where
/// `theta_plus` and `theta_minus` differ.
pub fn fit_sparse_bernoulli(s: &ClassSummary, k: usize, gamma: f64) -> Result<SparseBernoulliFit> {
    let m = s.m();
    if k > m {
        return Err(Error::cardinality("bernoulli", k, m));
    }
    let c = smoothed_counts(s, gamma)?;
    let n = c.n_plus + c.n_minus;

    let mut v = Vec::with_capacity(m);
    let mut w = Vec::with_capacity(m);
    for j in 0..m {
        let g = c.f_plus[j] + c.f_minus[j];
        v.push(binary_entropy_term(g, n));
        w.push(
            binary_entropy_term(c.f_plus[j], c.n_plus)
                + binary_entropy_term(c.f_minus[j], c.n_minus),
        );
    }
    let diff: Vec<f64> = w.iter().zip(&v).map(|(w, v)| w - v).collect();

    let selected = top_k_indices(&diff, k)?;
    let mut theta_plus: Vec<f64> = (0..m).map(|j| (c.f_plus[j] + c.f_minus[j]) / n).collect();
    let mut theta_minus = theta_plus.clone();
    for &j in &selected {
        theta_plus[j] = c.f_plus[j] / c.n_plus;
        theta_minus[j] = c.f_minus[j] / c.n_minus;
    }
    let objective = v.iter().sum::<f64>() + topk_sum(&diff, k)?;
    let model = BernoulliModel::from_parameters(
        theta_plus,
        theta_minus,
        s.log_prior_ratio(),
        selected,
        gamma,
    )?;
    Ok(SparseBernoulliFit {
        model,
        score: SbnbScore { v, w, diff },
        objective,
    })
}

/// Predicted labels; a zero score maps to `+1`.
pub fn predict_bernoulli(model: &BernoulliModel, x: &SparseCountMatrix) -> Result<Vec<Label>> {
    Ok(model
        .decision_function(x)?
        .into_iter()
        .map(Label::from_score)
        .collect())
}
