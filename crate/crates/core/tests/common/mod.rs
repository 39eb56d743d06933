//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparsenb::{ClassSummary, Label, LabeledDataset, SparseCountMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All subsets of `0..m` with at most `k` elements, as bitmasks.
pub fn subsets_up_to(m: usize, k: usize) -> impl Iterator<Item = u32> {
    (0u32..(1 << m)).filter(move |s| s.count_ones() as usize <= k)
}

/// Dense 0/1 data with both classes present.
pub struct DenseBinary {
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
    pub m: usize,
}

impl DenseBinary {
    pub fn random(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Self {
        let density = rng.random_range(0.1..0.9);
        let rows = (0..n)
            .map(|_| (0..m).map(|_| f64::from(u8::from(rng.random_bool(density)))).collect())
            .collect();
        let mut labels: Vec<Label> = (0..n)
            .map(|_| if rng.random_bool(0.5) { Label::Positive } else { Label::Negative })
            .collect();
        labels[0] = Label::Positive;
        labels[n - 1] = Label::Negative;
        Self { rows, labels, m }
    }

    pub fn dataset(&self) -> LabeledDataset {
        LabeledDataset::new(
            SparseCountMatrix::from_dense(self.m, &self.rows).unwrap(),
            self.labels.clone(),
        )
        .unwrap()
    }

    /// Appends `gamma` all-ones and `gamma` all-zeros rows to each class, which
    /// turns pseudo-count smoothing into plain counting.
    pub fn with_pseudo_rows(&self, gamma: usize) -> Self {
        let mut out = Self {
            rows: self.rows.clone(),
            labels: self.labels.clone(),
            m: self.m,
        };
        for label in [Label::Positive, Label::Negative] {
            for _ in 0..gamma {
                out.rows.push(vec![1.0; self.m]);
                out.labels.push(label);
                out.rows.push(vec![0.0; self.m]);
                out.labels.push(label);
            }
        }
        out
    }

    /// Sum over samples and features of `ln P(x_ij | y_i)`.
    pub fn log_likelihood(&self, theta_plus: &[f64], theta_minus: &[f64]) -> f64 {
        let mut total = 0.0;
        for (row, label) in self.rows.iter().zip(&self.labels) {
            let theta = match label {
                Label::Positive => theta_plus,
                Label::Negative => theta_minus,
            };
            for (x, t) in row.iter().zip(theta) {
                let p = if *x > 0.0 { *t } else { 1.0 - t };
                if p != 1.0 {
                    total += p.ln();
                }
            }
        }
        total
    }

    fn class_rate(&self, j: usize, class: Option<Label>) -> f64 {
        let (mut hits, mut count) = (0.0, 0.0);
        for (row, label) in self.rows.iter().zip(&self.labels) {
            if class.is_none_or(|c| c == *label) {
                hits += row[j];
                count += 1.0;
            }
        }
        hits / count
    }

    /// Best likelihood over supports of size at most `k`: per-class rates on
    /// the support, pooled rates elsewhere.
    pub fn sparse_optimum(&self, k: usize) -> f64 {
        subsets_up_to(self.m, k)
            .map(|mask| {
                let mut tp = vec![0.0; self.m];
                let mut tm = vec![0.0; self.m];
                for j in 0..self.m {
                    if mask >> j & 1 == 1 {
                        tp[j] = self.class_rate(j, Some(Label::Positive));
                        tm[j] = self.class_rate(j, Some(Label::Negative));
                    } else {
                        tp[j] = self.class_rate(j, None);
                        tm[j] = tp[j];
                    }
                }
                self.log_likelihood(&tp, &tm)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Maximizes a concave function on `[lo, hi]` by ternary search.
pub fn maximize_concave(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let a = lo + (hi - lo) / 3.0;
        let b = hi - (hi - lo) / 3.0;
        if f(a) < f(b) {
            lo = a;
        } else {
            hi = b;
        }
    }
    f(0.5 * (lo + hi)).max(f(lo)).max(f(hi))
}

fn xlny(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// Best multinomial log-likelihood when the two classes may differ only on
/// the support `mask`. The shared mass `c` on the complement is found
/// numerically; given `c`, each block is a plain multinomial fit.
pub fn multinomial_support_value(s: &ClassSummary, mask: u32) -> f64 {
    let m = s.m();
    let (fp, fm) = (s.f_plus(), s.f_minus());
    let on = |j: usize| mask >> j & 1 == 1;
    let g_off: f64 = (0..m).filter(|&j| !on(j)).map(|j| fp[j] + fm[j]).sum();
    let b_plus: f64 = (0..m).filter(|&j| on(j)).map(|j| fp[j]).sum();
    let b_minus: f64 = (0..m).filter(|&j| on(j)).map(|j| fm[j]).sum();
    let value = |c: f64| {
        let mut v = 0.0;
        for j in 0..m {
            if on(j) {
                v += xlny(fp[j], (1.0 - c) * fp[j] / b_plus) + xlny(fm[j], (1.0 - c) * fm[j] / b_minus);
            } else {
                let g = fp[j] + fm[j];
                v += xlny(g, c * g / g_off);
            }
        }
        v
    };
    if mask == 0 {
        value(1.0)
    } else if g_off == 0.0 {
        value(0.0)
    } else {
        maximize_concave(value, 1e-15, 1.0 - 1e-15)
    }
}

/// Exhaustive sparse multinomial optimum; `k` beyond `m` is clamped.
pub fn multinomial_phi(s: &ClassSummary, k: usize) -> f64 {
    subsets_up_to(s.m(), k.min(s.m()))
        .map(|mask| multinomial_support_value(s, mask))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Integer counts in `0..max_count` with no empty class total.
pub fn random_count_summary(rng: &mut ChaCha8Rng, m: usize, max_count: u32) -> ClassSummary {
    loop {
        let fp: Vec<f64> = (0..m).map(|_| f64::from(rng.random_range(0..max_count))).collect();
        let fm: Vec<f64> = (0..m).map(|_| f64::from(rng.random_range(0..max_count))).collect();
        if fp.iter().sum::<f64>() > 0.0 && fm.iter().sum::<f64>() > 0.0 {
            return ClassSummary::new(fp, fm, rng.random_range(1..30), rng.random_range(1..30)).unwrap();
        }
    }
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
