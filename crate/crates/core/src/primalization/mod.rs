//! Certificates and LP post-processing on top of the multinomial relaxation.
//!
//! [`sk_certificate`] gives the dual point for the top-`k` sum. [`lp_postprocess`]
//! turns a relaxation into a support with at most four fractional
//! coordinates, rounds those up and reports the exact likelihood of the
//! resulting model.

mod simplex;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub use simplex::{solve_boxed_lp, LpRow, LpSolution, LpStatus, Relation, Sense, FRACTIONAL_TOL, MAX_ROWS};

use crate::multinomial::{reconstruct_primal, MultinomialModel, SmnbRelaxation};
use crate::topk::descending_order;
use crate::{xlogy, ClassSummary, Error, Result};

/// Relative width of the band replacing the `r*` equality. The stage-one
/// vertex meets the row up to rounding, so the band only has to absorb
/// rounding; a wider band lets the random cost drift off binary vertices.
pub const R_STAR_BAND: f64 = 1e-13;
/// Absolute slack on the two class-mass rows, which absorbs the residual of
/// an inexact `alpha*`.
pub const MASS_BAND: f64 = 1e-13;

/// Dual point and primal indicator for `s_k(c) = min_l l k + sum max(0, c_i - l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkCertificate {
    pub lambda: f64,
    pub x: Vec<f64>,
    /// `1 - x`.
    pub z: Vec<f64>,
}

impl SkCertificate {
    /// `lambda k + sum max(0, c_i - lambda)`.
    pub fn dual_value(&self, c: &[f64], k: usize) -> f64 {
        self.lambda * k as f64 + c.iter().map(|&ci| (ci - self.lambda).max(0.0)).sum::<f64>()
    }

    /// `x . c`.
    pub fn primal_value(&self, c: &[f64]) -> f64 {
        self.x.iter().zip(c).map(|(x, c)| x * c).sum()
    }
}

/// `lambda` is the `k`-th largest entry (0 when `k = m`, the largest when
/// `k = 0`) and `x` the top-`k` indicator, lower index first on ties.
pub fn sk_certificate(c: &[f64], k: usize) -> Result<SkCertificate> {
    let m = c.len();
    if k > m {
        return Err(Error::cardinality("primalization", k, m));
    }
    if let Some(bad) = c.iter().find(|&&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::Primalization(format!(
            "s_k certificate needs finite non-negative entries, got {bad}"
        )));
    }
    let order = descending_order(c);
    let lambda = match k {
        _ if m == 0 => 0.0,
        0 => c[order[0]],
        _ if k == m => 0.0,
        _ => c[order[k - 1]],
    };
    let mut x = vec![0.0; m];
    for &i in &order[..k] {
        x[i] = 1.0;
    }
    let z = x.iter().map(|v| 1.0 - v).collect();
    Ok(SkCertificate { lambda, x, z })
}

/// Output of [`lp_postprocess`].
#[derive(Debug, Clone, PartialEq)]
pub struct LpPostprocess {
    /// Vertex of the random-cost LP over the optimal face.
    pub lp: LpSolution,
    /// Stage-one maximum, constant included.
    pub r_star: f64,
    /// Coordinates at 1 plus the fractional ones, ascending.
    pub support: Vec<usize>,
    pub refined: MultinomialModel,
    /// Log-likelihood of `refined` on the smoothed summary.
    pub value: f64,
}

/// Per-coordinate LP data at `alpha*`: objective coefficients, the constant
/// term and the two class-mass rows.
struct FaceData {
    coef: Vec<f64>,
    constant: f64,
    mass_plus: Vec<f64>,
    mass_minus: Vec<f64>,
    mass_rhs: f64,
}

fn face_data(s: &ClassSummary, alpha: f64, s_total: f64) -> FaceData {
    let m = s.m();
    let (mut coef, mut mass_plus, mut mass_minus) =
        (Vec::with_capacity(m), Vec::with_capacity(m), Vec::with_capacity(m));
    let (mut constant, mut theta_sum) = (0.0, 0.0);
    for (&p, &q) in s.f_plus().iter().zip(s.f_minus()) {
        let g = p + q;
        let theta = g / s_total;
        let theta_plus = p / (s_total * alpha);
        let theta_minus = q / (s_total * (1.0 - alpha));
        let pooled = xlogy(g, theta);
        coef.push(xlogy(p, theta_plus) + xlogy(q, theta_minus) - pooled);
        constant += pooled;
        theta_sum += theta;
        mass_plus.push(theta_plus - theta);
        mass_minus.push(theta_minus - theta);
    }
    FaceData {
        coef,
        constant,
        mass_plus,
        mass_minus,
        mass_rhs: 1.0 - theta_sum,
    }
}

/// Two-stage LP over the relaxation's optimal face followed by rounding.
///
/// Stage one maximizes the split likelihood over the face to get `r*`;
/// stage two minimizes a seeded Gaussian cost while keeping the likelihood
/// within a band of `r*`. Fractional coordinates of the resulting vertex are
/// rounded up, so the refined model has cardinality at most `k + |J|`.
pub fn lp_postprocess(s: &ClassSummary, relax: &SmnbRelaxation, seed: u64) -> Result<LpPostprocess> {
    let sm = s.smoothed(relax.gamma);
    let m = sm.m();
    if relax.h_at_star.len() != m {
        return Err(Error::dims("primalization", relax.h_at_star.len(), m));
    }
    if relax.k > m {
        return Err(Error::cardinality("primalization", relax.k, m));
    }
    let alpha = relax.alpha_star;
    if !(alpha > 0.0 && alpha < 1.0) || relax.s_total.is_nan() || relax.s_total <= 0.0 {
        return Err(Error::Primalization(format!(
            "relaxation has alpha* = {alpha}, S = {}",
            relax.s_total
        )));
    }
    let face = face_data(&sm, alpha, relax.s_total);
    let shared_rows = [
        LpRow::le(face.mass_plus.clone(), face.mass_rhs + MASS_BAND),
        LpRow::le(face.mass_minus.clone(), face.mass_rhs + MASS_BAND),
        LpRow::le(vec![1.0; m], relax.k as f64),
    ];

    let stage1 = solve_boxed_lp(&face.coef, &shared_rows, Sense::Maximize)?;
    if stage1.status != LpStatus::Optimal {
        return Err(Error::Primalization("stage-one LP infeasible".into()));
    }
    let r_star = face.constant + stage1.objective;

    let band = R_STAR_BAND * (1.0 + r_star.abs());
    let target = stage1.objective;
    let mut rows = vec![
        LpRow::le(face.coef.clone(), target + band),
        LpRow::le(face.coef.iter().map(|c| -c).collect(), -(target - band)),
    ];
    rows.extend(shared_rows);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cost: Vec<f64> = (0..m).map(|_| StandardNormal.sample(&mut rng)).collect();
    let lp = solve_boxed_lp(&cost, &rows, Sense::Minimize)?;
    if lp.status != LpStatus::Optimal {
        return Err(Error::Primalization(format!(
            "post-processing LP infeasible around r* = {r_star}"
        )));
    }

    let support: Vec<usize> = (0..m)
        .filter(|&i| lp.x[i] > FRACTIONAL_TOL)
        .collect();
    let primal = reconstruct_primal(&sm, &support)?;
    let refined = MultinomialModel::from_parameters(
        primal.model.theta_plus().to_vec(),
        primal.model.theta_minus().to_vec(),
        primal.model.log_prior_ratio(),
        primal.model.selected().to_vec(),
        relax.gamma,
    )?;
    Ok(LpPostprocess {
        lp,
        r_star,
        support,
        refined,
        value: primal.value,
    })
}
