//! Multinomial naive Bayes and its cardinality-constrained relaxation.
//!
//! The sparse problem maximizes `f+ . ln t+ + f- . ln t-` over pairs of
//! probability vectors that differ in at most `k` coordinates. Its dual
//! collapses to a convex problem in a single scalar `alpha`:
//!
//! ```text
//! psi(k) = C + min_{alpha in (0,1)} s_k(h(alpha))
//! h(alpha) = f+ ln f+ + f- ln f- - g ln g - f+ ln(alpha) - f- ln(1 - alpha)
//! C = g . ln g - S ln S,   g = f+ + f-,   S = 1'g
//! ```
//!
//! `psi(k)` upper-bounds the sparse optimum and is exact at `k = m`. The
//! top-`k` entries of `h` at the minimizer define a support from which a
//! feasible model is rebuilt by [`reconstruct_primal`]. The gap satisfies
//! `psi(k - 4) <= phi(k) <= psi(k) <= phi(k + 4)`.

use crate::data::{ClassSummary, Label, SparseCountMatrix};
use crate::scalar::golden_section;
use crate::topk::topk_sum_in_place;
use crate::{top_k_indices, xlogx, xlogy, Error, Result};

pub use crate::topk::topk_sum;

/// Default bracket width for the search over `alpha`.
pub const DEFAULT_TOL: f64 = 1e-10;
/// The search runs on `[ALPHA_MARGIN, 1 - ALPHA_MARGIN]`.
pub const ALPHA_MARGIN: f64 = 1e-12;
/// Smoothing applied when a summary with zero counts is given `gamma = 0`.
pub const ZERO_COUNT_GAMMA: f64 = 1e-10;
const MAX_ITER: usize = 300;

/// Fitted multinomial model. The decision rule is
/// `sign(log_prior_ratio + (ln t+ - ln t-) . x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultinomialModel {
    theta_plus: Vec<f64>,
    theta_minus: Vec<f64>,
    log_prior_ratio: f64,
    selected: Vec<usize>,
    gamma: f64,
    weights: Vec<f64>,
}

impl MultinomialModel {
    /// Builds a model from its parameters. Both vectors must lie on the
    /// probability simplex (to within `1e-9`); coordinates with bitwise-equal
    /// parameters get a weight of exactly zero.
    pub fn from_parameters(
        theta_plus: Vec<f64>,
        theta_minus: Vec<f64>,
        log_prior_ratio: f64,
        selected: Vec<usize>,
        gamma: f64,
    ) -> Result<Self> {
        let m = theta_plus.len();
        if theta_minus.len() != m {
            return Err(Error::dims("multinomial", m, theta_minus.len()));
        }
        for theta in [&theta_plus, &theta_minus] {
            if theta.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
                return Err(Error::Multinomial("parameters must be finite and non-negative".into()));
            }
            let total: f64 = theta.iter().sum();
            if m > 0 && (total - 1.0).abs() > 1e-9 {
                return Err(Error::Multinomial(format!(
                    "parameters sum to {total}, not 1"
                )));
            }
        }
        if let Some(&j) = selected.iter().find(|&&j| j >= m) {
            return Err(Error::Multinomial(format!(
                "selected feature {j} out of range for m = {m}"
            )));
        }
        let weights = theta_plus
            .iter()
            .zip(&theta_minus)
            .map(|(&p, &q)| if p == q { 0.0 } else { p.ln() - q.ln() })
            .collect();
        Ok(Self {
            theta_plus,
            theta_minus,
            log_prior_ratio,
            selected,
            gamma,
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

    pub fn bias(&self) -> f64 {
        self.log_prior_ratio
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Features allowed to differ between the classes, ascending.
    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    /// `f+ . ln t+ + f- . ln t-` for the summary as given (no smoothing is
    /// applied here).
    pub fn log_likelihood(&self, s: &ClassSummary) -> Result<f64> {
        if s.m() != self.m() {
            return Err(Error::dims("multinomial", self.m(), s.m()));
        }
        Ok(multinomial_log_likelihood(s, &self.theta_plus, &self.theta_minus))
    }

    pub fn decision_function(&self, x: &SparseCountMatrix) -> Result<Vec<f64>> {
        if x.n_cols() != self.m() {
            return Err(Error::dims("multinomial", self.m(), x.n_cols()));
        }
        x.affine_scores(self.bias(), &self.weights)
    }
}

pub(crate) fn multinomial_log_likelihood(s: &ClassSummary, theta_plus: &[f64], theta_minus: &[f64]) -> f64 {
    (0..s.m())
        .map(|j| xlogy(s.f_plus()[j], theta_plus[j]) + xlogy(s.f_minus()[j], theta_minus[j]))
        .sum()
}

/// Classical fit `t_pm = (f_pm + gamma) / sum(f_pm + gamma)`.
pub fn fit_multinomial_mle(s: &ClassSummary, gamma: f64) -> Result<MultinomialModel> {
    check_gamma(gamma)?;
    let normalize = |f: &[f64], class: &str| -> Result<Vec<f64>> {
        let total: f64 = f.iter().map(|v| v + gamma).sum();
        if total <= 0.0 {
            return Err(Error::Multinomial(format!(
                "{class} class has zero total mass; use gamma > 0"
            )));
        }
        Ok(f.iter().map(|v| (v + gamma) / total).collect())
    };
    let theta_plus = normalize(s.f_plus(), "positive")?;
    let theta_minus = normalize(s.f_minus(), "negative")?;
    MultinomialModel::from_parameters(
        theta_plus,
        theta_minus,
        s.log_prior_ratio(),
        (0..s.m()).collect(),
        gamma,
    )
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidSmoothing {
            module: "multinomial",
            gamma,
        })
    }
}

/// Smoothing actually used by the relaxation: `gamma`, or
/// [`ZERO_COUNT_GAMMA`] when `gamma` is zero and some class sum is zero.
pub fn effective_gamma(s: &ClassSummary, gamma: f64) -> f64 {
    if gamma == 0.0 && s.has_zero_counts() {
        ZERO_COUNT_GAMMA
    } else {
        gamma
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Multinomial(format!("alpha = {alpha} outside (0, 1)")))
    }
}

/// `f+ ln f+ + f- ln f- - g ln g`, the `alpha`-independent part of `h`.
fn h_base(f_plus: &[f64], f_minus: &[f64]) -> Vec<f64> {
    f_plus
        .iter()
        .zip(f_minus)
        .map(|(&p, &q)| xlogx(p) + xlogx(q) - xlogx(p + q))
        .collect()
}

/// Per-feature benefit of letting the two classes differ, at mixing weight
/// `alpha`. Zero counts follow `0 ln 0 = 0`.
pub fn h_vector(s: &ClassSummary, alpha: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    let (la, lb) = (alpha.ln(), (1.0 - alpha).ln());
    Ok(h_base(s.f_plus(), s.f_minus())
        .into_iter()
        .zip(s.f_plus().iter().zip(s.f_minus()))
        .map(|(base, (&p, &q))| base - xlogy_ln(p, la) - xlogy_ln(q, lb))
        .collect())
}

#[inline]
fn xlogy_ln(a: f64, ln_b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * ln_b
    }
}

/// Optional part of [`SmnbRelaxation`]: the bound at `k - 4` and the width
/// `delta = psi(k) - psi(k - 4)`. Absent when `k < 4`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GapBounds {
    pub psi_km4: Option<f64>,
    pub delta: Option<f64>,
}

/// Everything the relaxation produces for one cardinality `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmnbRelaxation {
    pub k: usize,
    /// Smoothing actually applied to the summary.
    pub gamma: f64,
    pub alpha_star: f64,
    pub h_at_star: Vec<f64>,
    /// Top-`k` entries of `h(alpha_star)`, ascending.
    pub top_k: Vec<usize>,
    /// `g . ln g - S ln S`.
    pub c: f64,
    /// `S = 1'(f+ + f-)`.
    pub s_total: f64,
    pub psi: f64,
    pub primal_value: f64,
    pub primal_model: MultinomialModel,
    pub gap: GapBounds,
    pub iterations: usize,
}

/// Reusable state for evaluating `psi(k)` at many `k` on one summary.
#[derive(Debug, Clone)]
pub struct RelaxationSolver {
    summary: ClassSummary,
    gamma: f64,
    base: Vec<f64>,
    c: f64,
    s_total: f64,
    alpha_pooled: f64,
}

/// Minimizer of `s_k(h(alpha))` for one `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaMinimum {
    pub alpha: f64,
    /// `s_k(h(alpha))`.
    pub value: f64,
    pub iterations: usize,
}

impl RelaxationSolver {
    /// Smooths the summary (see [`effective_gamma`]) and precomputes the
    /// `alpha`-independent terms.
    pub fn new(s: &ClassSummary, gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        let gamma = effective_gamma(s, gamma);
        let summary = s.smoothed(gamma);
        if summary.has_zero_counts() {
            return Err(Error::Multinomial(
                "h is not finite: zero class sums need gamma > 0".into(),
            ));
        }
        let base = h_base(summary.f_plus(), summary.f_minus());
        let total_plus: f64 = summary.f_plus().iter().sum();
        let total_minus: f64 = summary.f_minus().iter().sum();
        let s_total = total_plus + total_minus;
        let c = summary
            .f_plus()
            .iter()
            .zip(summary.f_minus())
            .map(|(p, q)| xlogx(p + q))
            .sum::<f64>()
            - xlogx(s_total);
        if !c.is_finite() || base.iter().any(|b| !b.is_finite()) {
            return Err(Error::Multinomial("h is not finite".into()));
        }
        Ok(Self {
            summary,
            gamma,
            base,
            c,
            s_total,
            alpha_pooled: if s_total > 0.0 { total_plus / s_total } else { 0.5 },
        })
    }

    pub fn m(&self) -> usize {
        self.base.len()
    }

    /// The smoothed summary all quantities refer to.
    pub fn summary(&self) -> &ClassSummary {
        &self.summary
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn constant(&self) -> f64 {
        self.c
    }

    pub fn s_total(&self) -> f64 {
        self.s_total
    }

    fn fill_h(&self, alpha: f64, out: &mut Vec<f64>) {
        let (la, lb) = (alpha.ln(), (1.0 - alpha).ln());
        out.clear();
        out.extend(
            self.base
                .iter()
                .zip(self.summary.f_plus().iter().zip(self.summary.f_minus()))
                .map(|(b, (p, q))| b - p * la - q * lb),
        );
    }

    pub fn h(&self, alpha: f64) -> Result<Vec<f64>> {
        check_alpha(alpha)?;
        let mut out = Vec::with_capacity(self.m());
        self.fill_h(alpha, &mut out);
        Ok(out)
    }

    /// Minimizes the convex map `alpha -> s_k(h(alpha))`.
    pub fn minimize(&self, k: usize, tol: f64) -> Result<AlphaMinimum> {
        let m = self.m();
        if k > m {
            return Err(Error::cardinality("multinomial", k, m));
        }
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::Multinomial(format!("tolerance must be positive, got {tol}")));
        }
        if k == 0 {
            // s_0 vanishes identically
            return Ok(AlphaMinimum {
                alpha: self.alpha_pooled.clamp(ALPHA_MARGIN, 1.0 - ALPHA_MARGIN),
                value: 0.0,
                iterations: 0,
            });
        }
        let mut buf = Vec::with_capacity(m);
        let found = golden_section(
            |alpha| {
                self.fill_h(alpha, &mut buf);
                topk_sum_in_place(&mut buf, k)
            },
            ALPHA_MARGIN,
            1.0 - ALPHA_MARGIN,
            tol,
            MAX_ITER,
        );
        let mut best = AlphaMinimum {
            alpha: found.x,
            value: found.fx,
            iterations: found.iterations,
        };
        // Golden section stalls where the objective is flat to rounding. On a
        // smooth piece the minimizer for the current top-k set T is
        // F+_T / (F+_T + F-_T); keep it unless it is worse beyond rounding.
        self.fill_h(best.alpha, &mut buf);
        let top = top_k_indices(&buf, k)?;
        let fp_t: f64 = top.iter().map(|&i| self.summary.f_plus()[i]).sum();
        let fm_t: f64 = top.iter().map(|&i| self.summary.f_minus()[i]).sum();
        let candidate = fp_t / (fp_t + fm_t);
        if candidate > ALPHA_MARGIN && candidate < 1.0 - ALPHA_MARGIN {
            self.fill_h(candidate, &mut buf);
            let value = topk_sum_in_place(&mut buf, k);
            if value <= best.value + 1e-13 * (1.0 + best.value.abs()) {
                best.alpha = candidate;
                best.value = value;
            }
        }
        Ok(best)
    }

    /// `psi(k) = C + min_alpha s_k(h(alpha))`.
    pub fn psi(&self, k: usize, tol: f64) -> Result<f64> {
        Ok(self.c + self.minimize(k, tol)?.value)
    }

    /// Bound, top-`k` support and reconstructed primal point for one `k`.
    /// The gap fields are left empty.
    pub fn relax(&self, k: usize, tol: f64) -> Result<SmnbRelaxation> {
        let min = self.minimize(k, tol)?;
        let h_at_star = self.h(min.alpha)?;
        let top_k = top_k_indices(&h_at_star, k)?;
        let primal = reconstruct_primal(&self.summary, &top_k)?;
        Ok(SmnbRelaxation {
            k,
            gamma: self.gamma,
            alpha_star: min.alpha,
            h_at_star,
            top_k,
            c: self.c,
            s_total: self.s_total,
            psi: self.c + min.value,
            primal_value: primal.value,
            primal_model: primal.model.with_gamma(self.gamma),
            gap: GapBounds::default(),
            iterations: min.iterations,
        })
    }
}

/// Relaxation bound `psi(k)` with its primal reconstruction and, for
/// `k >= 4`, the bound at `k - 4`.
pub fn smnb_bound(s: &ClassSummary, k: usize, gamma: f64, tol: f64) -> Result<SmnbRelaxation> {
    let solver = RelaxationSolver::new(s, gamma)?;
    let mut relax = solver.relax(k, tol)?;
    if k >= 4 {
        let psi_km4 = solver.psi(k - 4, tol)?;
        relax.gap = GapBounds {
            psi_km4: Some(psi_km4),
            delta: Some(relax.psi - psi_km4),
        };
    }
    Ok(relax)
}

/// A feasible model together with its log-likelihood.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimalPoint {
    pub model: MultinomialModel,
    pub value: f64,
}

/// Best model whose class parameters agree outside `support`.
///
/// Coordinates outside the support get `(f+ + f-) / S`; inside it,
/// `t_pm = ((B+ + B-) / B_pm) f_pm / S` with `B_pm` the support mass of each
/// class. When the support carries no mass for one class the fully pooled
/// model is returned instead.
pub fn reconstruct_primal(s: &ClassSummary, support: &[usize]) -> Result<PrimalPoint> {
    let m = s.m();
    let mut free = vec![false; m];
    for &j in support {
        if j >= m {
            return Err(Error::Multinomial(format!(
                "support index {j} out of range for m = {m}"
            )));
        }
        free[j] = true;
    }
    let (fp, fm) = (s.f_plus(), s.f_minus());
    let s_total: f64 = fp.iter().chain(fm).sum();
    if s_total <= 0.0 {
        return Err(Error::Multinomial("summary has zero total mass".into()));
    }
    let (mut b_plus, mut b_minus) = (0.0, 0.0);
    for j in (0..m).filter(|&j| free[j]) {
        b_plus += fp[j];
        b_minus += fm[j];
    }
    let split = !support.is_empty() && b_plus > 0.0 && b_minus > 0.0;

    let mut theta_plus: Vec<f64> = (0..m).map(|j| (fp[j] + fm[j]) / s_total).collect();
    let mut theta_minus = theta_plus.clone();
    let mut selected = Vec::new();
    if split {
        let b = b_plus + b_minus;
        let (scale_plus, scale_minus) = (b / b_plus, b / b_minus);
        for j in (0..m).filter(|&j| free[j]) {
            theta_plus[j] = scale_plus * fp[j] / s_total;
            theta_minus[j] = scale_minus * fm[j] / s_total;
            selected.push(j);
        }
    }
    let value = multinomial_log_likelihood(s, &theta_plus, &theta_minus);
    let model = MultinomialModel::from_parameters(
        theta_plus,
        theta_minus,
        s.log_prior_ratio(),
        selected,
        0.0,
    )?;
    Ok(PrimalPoint { model, value })
}

/// Bracket `psi(k - 4) <= phi(k) <= psi(k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapCertificate {
    pub psi_km4: f64,
    pub psi_k: f64,
    pub delta: f64,
}

pub fn gap_certificate(s: &ClassSummary, k: usize, gamma: f64, tol: f64) -> Result<GapCertificate> {
    if k < 4 {
        return Err(Error::Multinomial(format!("gap certificate needs k >= 4, got {k}")));
    }
    let solver = RelaxationSolver::new(s, gamma)?;
    let psi_k = solver.psi(k, tol)?;
    let psi_km4 = solver.psi(k - 4, tol)?;
    Ok(GapCertificate {
        psi_km4,
        psi_k,
        delta: psi_k - psi_km4,
    })
}

/// Predicted labels; a zero score maps to `+1`.
pub fn predict_multinomial(model: &MultinomialModel, x: &SparseCountMatrix) -> Result<Vec<Label>> {
    Ok(model
        .decision_function(x)?
        .into_iter()
        .map(Label::from_score)
        .collect())
}
