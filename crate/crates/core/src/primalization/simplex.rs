//! Dense bounded-variable primal simplex for LPs over the unit box with a
//! handful of general rows.
//!
//! Nonbasic variables always sit at a bound, so the returned point is a
//! vertex: at most one structural variable per general row is strictly
//! between 0 and 1. Bland's rule (lowest eligible index for both the
//! entering and the leaving variable) prevents cycling.

use crate::{Error, Result};

/// Most general rows accepted by [`solve_boxed_lp`].
pub const MAX_ROWS: usize = 8;
/// `x_i` farther than this from both 0 and 1 counts as fractional.
pub const FRACTIONAL_TOL: f64 = 1e-7;

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `a . x <= b`
    Le,
    /// `a . x = b`
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// One general constraint `coeffs . x (<= | =) rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl LpRow {
    pub fn le(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self {
            coeffs,
            relation: Relation::Le,
            rhs,
        }
    }

    pub fn eq(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self {
            coeffs,
            relation: Relation::Eq,
            rhs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

/// Vertex solution of a boxed LP. `x` is empty and `objective` is NaN when
/// the problem is infeasible.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Indices with `x_i` not within [`FRACTIONAL_TOL`] of 0 or 1.
    pub fractional: Vec<usize>,
    pub status: LpStatus,
}

impl LpSolution {
    fn infeasible() -> Self {
        Self {
            x: Vec::new(),
            objective: f64::NAN,
            fractional: Vec::new(),
            status: LpStatus::Infeasible,
        }
    }
}

pub(crate) fn fractional_indices(x: &[f64]) -> Vec<usize> {
    x.iter()
        .enumerate()
        .filter(|(_, &v)| v > FRACTIONAL_TOL && v < 1.0 - FRACTIONAL_TOL)
        .map(|(i, _)| i)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Basic,
    AtLower,
    AtUpper,
}

struct Tableau {
    /// `B^-1 A`, one row per constraint.
    rows: Vec<Vec<f64>>,
    /// Current values of the basic variables.
    beta: Vec<f64>,
    basis: Vec<usize>,
    state: Vec<State>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// Reduced costs for the current phase.
    reduced: Vec<f64>,
    iterations: usize,
    max_iterations: usize,
}

enum Step {
    Optimal,
    Moved,
}

impl Tableau {
    fn value(&self, j: usize) -> f64 {
        match self.state[j] {
            State::AtLower => self.lower[j],
            State::AtUpper => self.upper[j],
            State::Basic => {
                let r = self.basis.iter().position(|&b| b == j).expect("basic variable in basis");
                self.beta[r]
            }
        }
    }

    fn price(&mut self, cost: &[f64]) {
        self.reduced = cost.to_vec();
        for (r, row) in self.rows.iter().enumerate() {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                for (d, a) in self.reduced.iter_mut().zip(row) {
                    *d -= cb * a;
                }
            }
        }
    }

    fn step(&mut self) -> Result<Step> {
        let n_vars = self.state.len();
        let entering = (0..n_vars).find(|&j| match self.state[j] {
            State::Basic => false,
            State::AtLower => self.reduced[j] < -COST_TOL && self.upper[j] > self.lower[j],
            State::AtUpper => self.reduced[j] > COST_TOL,
        });
        let Some(q) = entering else {
            return Ok(Step::Optimal);
        };
        let dir = if self.state[q] == State::AtLower { 1.0 } else { -1.0 };

        // (step length, basic variable index, row, leaves at upper)
        let mut best: Option<(f64, usize, usize, bool)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            let alpha = row[q] * dir;
            let b = self.basis[r];
            let candidate = if alpha > PIVOT_TOL {
                Some((((self.beta[r] - self.lower[b]) / alpha).max(0.0), false))
            } else if alpha < -PIVOT_TOL && self.upper[b].is_finite() {
                Some((((self.upper[b] - self.beta[r]) / -alpha).max(0.0), true))
            } else {
                None
            };
            if let Some((t, at_upper)) = candidate {
                let better = match best {
                    None => true,
                    Some((bt, bb, _, _)) => t < bt - 1e-12 || (t <= bt + 1e-12 && b < bb),
                };
                if better {
                    best = Some((t, b, r, at_upper));
                }
            }
        }
        let flip = self.upper[q] - self.lower[q];
        let t = match best {
            Some((t, ..)) => t.min(flip),
            None => flip,
        };
        if !t.is_finite() {
            return Err(Error::Primalization(
                "LP unbounded; cannot happen with box bounds".into(),
            ));
        }
        for (r, row) in self.rows.iter().enumerate() {
            self.beta[r] -= t * row[q] * dir;
        }
        self.iterations += 1;

        match best {
            Some((bt, leaving, r, at_upper)) if bt <= flip => {
                let entering_value = if dir > 0.0 {
                    self.lower[q] + t
                } else {
                    self.upper[q] - t
                };
                self.state[leaving] = if at_upper { State::AtUpper } else { State::AtLower };
                self.state[q] = State::Basic;
                self.basis[r] = q;
                self.beta[r] = entering_value;
                self.pivot(r, q);
            }
            _ => {
                self.state[q] = if dir > 0.0 { State::AtUpper } else { State::AtLower };
            }
        }
        Ok(Step::Moved)
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let p = self.rows[r][q];
        for a in self.rows[r].iter_mut() {
            *a /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[q];
            if factor != 0.0 {
                for (a, pr) in row.iter_mut().zip(&pivot_row) {
                    *a -= factor * pr;
                }
                row[q] = 0.0;
            }
        }
        let factor = self.reduced[q];
        if factor != 0.0 {
            for (d, pr) in self.reduced.iter_mut().zip(&pivot_row) {
                *d -= factor * pr;
            }
            self.reduced[q] = 0.0;
        }
    }

    fn run(&mut self, cost: &[f64]) -> Result<()> {
        self.price(cost);
        loop {
            if self.iterations > self.max_iterations {
                return Err(Error::Primalization(format!(
                    "simplex exceeded {} iterations",
                    self.max_iterations
                )));
            }
            if let Step::Optimal = self.step()? {
                return Ok(());
            }
        }
    }
}

/// Solves `min/max costs . x` over `x in [0, 1]^n` and the given rows,
/// returning a vertex optimum or an infeasible status.
pub fn solve_boxed_lp(costs: &[f64], rows: &[LpRow], sense: Sense) -> Result<LpSolution> {
    let n = costs.len();
    if rows.len() > MAX_ROWS {
        return Err(Error::Primalization(format!(
            "at most {MAX_ROWS} general rows supported, got {}",
            rows.len()
        )));
    }
    for row in rows {
        if row.coeffs.len() != n {
            return Err(Error::dims("primalization", n, row.coeffs.len()));
        }
        if !row.rhs.is_finite() || row.coeffs.iter().any(|a| !a.is_finite()) {
            return Err(Error::Primalization("LP data must be finite".into()));
        }
    }
    if costs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Primalization("LP costs must be finite".into()));
    }

    // Column layout: structural | one slack per Le row | one artificial per
    // row that x = 0 does not satisfy.
    let n_slack = rows.iter().filter(|r| r.relation == Relation::Le).count();
    let mut scaled: Vec<(Vec<f64>, f64)> = rows
        .iter()
        .map(|r| {
            let scale = r.coeffs.iter().fold(0.0f64, |acc, a| acc.max(a.abs()));
            let scale = if scale > 0.0 { scale } else { 1.0 };
            (r.coeffs.iter().map(|a| a / scale).collect(), r.rhs / scale)
        })
        .collect();
    let needs_artificial: Vec<bool> = rows
        .iter()
        .zip(&scaled)
        .map(|(r, (_, b))| r.relation == Relation::Eq || *b < 0.0)
        .collect();
    let n_art = needs_artificial.iter().filter(|&&a| a).count();
    let n_vars = n + n_slack + n_art;

    let lower = vec![0.0; n_vars];
    let mut upper = vec![1.0; n_vars];
    for u in upper.iter_mut().skip(n) {
        *u = f64::INFINITY;
    }
    let mut state = vec![State::AtLower; n_vars];
    let mut basis = Vec::with_capacity(rows.len());
    let mut tab_rows = Vec::with_capacity(rows.len());
    let mut beta = Vec::with_capacity(rows.len());
    let mut phase1_cost = vec![0.0; n_vars];
    let (mut next_slack, mut next_art) = (n, n + n_slack);
    for (i, (coeffs, rhs)) in scaled.iter_mut().enumerate() {
        let mut row = vec![0.0; n_vars];
        row[..n].copy_from_slice(coeffs);
        let mut basic = None;
        if rows[i].relation == Relation::Le {
            row[next_slack] = 1.0;
            if !needs_artificial[i] {
                basic = Some(next_slack);
            }
            next_slack += 1;
        }
        let mut value = *rhs;
        if needs_artificial[i] {
            let sign = if *rhs >= 0.0 { 1.0 } else { -1.0 };
            row[next_art] = sign;
            phase1_cost[next_art] = 1.0;
            basic = Some(next_art);
            next_art += 1;
            // express the row in terms of the artificial: divide by its sign
            for a in row.iter_mut() {
                *a *= sign;
            }
            value = rhs.abs();
        }
        let b = basic.expect("every row has a starting basic variable");
        state[b] = State::Basic;
        basis.push(b);
        tab_rows.push(row);
        beta.push(value);
    }

    let mut tab = Tableau {
        rows: tab_rows,
        beta,
        basis,
        state,
        lower,
        upper: upper.clone(),
        reduced: Vec::new(),
        iterations: 0,
        max_iterations: 100 * (n_vars + rows.len()) + 1000,
    };

    if n_art > 0 {
        tab.run(&phase1_cost)?;
        let infeasibility: f64 = (n + n_slack..n_vars).map(|j| tab.value(j)).sum();
        if infeasibility > FEAS_TOL {
            return Ok(LpSolution::infeasible());
        }
        for j in n + n_slack..n_vars {
            tab.upper[j] = 0.0;
            if tab.state[j] == State::AtUpper {
                tab.state[j] = State::AtLower;
            }
        }
    }

    let mut cost = vec![0.0; n_vars];
    for (c, &orig) in cost.iter_mut().zip(costs) {
        *c = match sense {
            Sense::Minimize => orig,
            Sense::Maximize => -orig,
        };
    }
    tab.run(&cost)?;

    let x: Vec<f64> = (0..n).map(|j| tab.value(j).clamp(0.0, 1.0)).collect();
    let objective = x.iter().zip(costs).map(|(x, c)| x * c).sum();
    Ok(LpSolution {
        fractional: fractional_indices(&x),
        x,
        objective,
        status: LpStatus::Optimal,
    })
}
