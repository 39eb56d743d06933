//! Fast ranking baselines: thresholded multinomial NB and the odds ratio.

use crate::multinomial::MultinomialModel;
use crate::topk::descending_order;
use crate::{ClassSummary, Error, Result};

/// Per-feature scores and the indices sorted by descending score, lower
/// index first on ties.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRanking {
    pub scores: Vec<f64>,
    pub order: Vec<usize>,
}

impl FeatureRanking {
    pub fn from_scores(scores: Vec<f64>) -> Result<Self> {
        if let Some(j) = scores.iter().position(|s| !s.is_finite()) {
            return Err(Error::Baselines(format!("score of feature {j} is not finite")));
        }
        let order = descending_order(&scores);
        Ok(Self { scores, order })
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Ranks features by `|ln theta+ - ln theta-|` of a fitted model.
pub fn tmnb_rank(model: &MultinomialModel) -> Result<FeatureRanking> {
    let scores: Vec<f64> = model
        .theta_plus()
        .iter()
        .zip(model.theta_minus())
        .map(|(&p, &q)| if p == q { 0.0 } else { (p.ln() - q.ln()).abs() })
        .collect();
    FeatureRanking::from_scores(scores)
}

/// Absolute log odds ratio of feature occurrence, with
/// `p_pm = (f_pm + gamma) / (n_pm + 2 gamma)`. Expects a summary of
/// binarized data.
pub fn odds_ratio_rank(s: &ClassSummary, gamma: f64) -> Result<FeatureRanking> {
    if gamma <= 0.0 || !gamma.is_finite() {
        return Err(Error::InvalidSmoothing {
            module: "baselines",
            gamma,
        });
    }
    let denom_plus = s.n_plus() as f64 + 2.0 * gamma;
    let denom_minus = s.n_minus() as f64 + 2.0 * gamma;
    let mut scores = Vec::with_capacity(s.m());
    for (j, (&fp, &fm)) in s.f_plus().iter().zip(s.f_minus()).enumerate() {
        let p = (fp + gamma) / denom_plus;
        let q = (fm + gamma) / denom_minus;
        if p >= 1.0 || q >= 1.0 {
            return Err(Error::NonBinarySummary {
                feature: j,
                count: if p >= 1.0 { fp } else { fm },
                class_size: if p >= 1.0 { s.n_plus() } else { s.n_minus() },
            });
        }
        scores.push(((p.ln() - (1.0 - p).ln()) - (q.ln() - (1.0 - q).ln())).abs());
    }
    FeatureRanking::from_scores(scores)
}

/// The first `k` entries of the ranking order.
pub fn select_top(r: &FeatureRanking, k: usize) -> Result<Vec<usize>> {
    if k > r.len() {
        return Err(Error::cardinality("baselines", k, r.len()));
    }
    Ok(r.order[..k].to_vec())
}
