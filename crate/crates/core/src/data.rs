//! Sparse datasets and the per-class sufficient statistics.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Binary class label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    /// `+1` or `-1`.
    pub fn sign(self) -> i8 {
        match self {
            Label::Positive => 1,
            Label::Negative => -1,
        }
    }

    /// Decision rule convention: a score of exactly zero maps to `Positive`.
    pub fn from_score(score: f64) -> Self {
        if score >= 0.0 {
            Label::Positive
        } else {
            Label::Negative
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Positive => f.write_str("+1"),
            Label::Negative => f.write_str("-1"),
        }
    }
}

/// Non-negative feature matrix in compressed sparse row layout. Rows are
/// documents, columns are features.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseCountMatrix {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseCountMatrix {
    /// Builds a matrix from raw CSR arrays, checking every structural
    /// invariant. Duplicate column indices within a row are rejected.
    pub fn new(
        n_rows: usize,
        n_cols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if row_ptr.len() != n_rows + 1 {
            return Err(Error::InvalidData(format!(
                "row_ptr has length {} but n_rows + 1 = {}",
                row_ptr.len(),
                n_rows + 1
            )));
        }
        if row_ptr[0] != 0 {
            return Err(Error::InvalidData("row_ptr[0] must be 0".into()));
        }
        if col_idx.len() != values.len() || row_ptr[n_rows] != values.len() {
            return Err(Error::InvalidData(format!(
                "row_ptr ends at {} but there are {} column indices and {} values",
                row_ptr[n_rows],
                col_idx.len(),
                values.len()
            )));
        }
        for (row, w) in row_ptr.windows(2).enumerate() {
            if w[1] < w[0] {
                return Err(Error::InvalidData(format!("row_ptr decreases at row {row}")));
            }
            let cols = &col_idx[w[0]..w[1]];
            for (pos, &c) in cols.iter().enumerate() {
                if c >= n_cols {
                    return Err(Error::InvalidData(format!(
                        "row {row}: column {c} out of range for {n_cols} columns"
                    )));
                }
                if pos > 0 && cols[pos - 1] >= c {
                    return Err(Error::InvalidData(format!(
                        "row {row}: column indices not strictly increasing ({} then {c})",
                        cols[pos - 1]
                    )));
                }
            }
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidData(format!(
                "values must be finite and non-negative, found {v}"
            )));
        }
        Ok(Self {
            n_rows,
            n_cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Builds a matrix from per-row `(column, value)` lists.
    pub fn from_rows<R>(n_cols: usize, rows: &[R]) -> Result<Self>
    where
        R: AsRef<[(usize, f64)]>,
    {
        let nnz = rows.iter().map(|r| r.as_ref().len()).sum();
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        let mut col_idx = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        row_ptr.push(0);
        for row in rows {
            for &(c, v) in row.as_ref() {
                col_idx.push(c);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        Self::new(rows.len(), n_cols, row_ptr, col_idx, values)
    }

    /// Builds a matrix from dense rows, storing only the nonzero entries.
    pub fn from_dense<R>(n_cols: usize, rows: &[R]) -> Result<Self>
    where
        R: AsRef<[f64]>,
    {
        let sparse: Vec<Vec<(usize, f64)>> = rows
            .iter()
            .map(|r| {
                let r = r.as_ref();
                if r.len() != n_cols {
                    return Err(Error::dims("data_model", n_cols, r.len()));
                }
                Ok(r.iter()
                    .copied()
                    .enumerate()
                    .filter(|&(_, v)| v != 0.0)
                    .collect())
            })
            .collect::<Result<_>>()?;
        Self::from_rows(n_cols, &sparse)
    }

    pub fn empty(n_cols: usize) -> Self {
        Self {
            n_rows: 0,
            n_cols,
            row_ptr: vec![0],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values stored in row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[lo..hi], &self.values[lo..hi])
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[usize], &[f64])> + '_ {
        (0..self.n_rows).map(move |i| self.row(i))
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n_cols];
        for (&c, &v) in self.col_idx.iter().zip(&self.values) {
            sums[c] += v;
        }
        sums
    }

    /// `bias + weights . row` for every row.
    pub fn affine_scores(&self, bias: f64, weights: &[f64]) -> Result<Vec<f64>> {
        if weights.len() != self.n_cols {
            return Err(Error::dims("data_model", weights.len(), self.n_cols));
        }
        Ok(self
            .rows()
            .map(|(cols, vals)| {
                bias + cols
                    .iter()
                    .zip(vals)
                    .map(|(&c, &v)| weights[c] * v)
                    .sum::<f64>()
            })
            .collect())
    }

    /// Keeps only the listed columns, renumbered `0..columns.len()` in the
    /// order given.
    pub fn select_columns(&self, columns: &[usize]) -> Result<Self> {
        let mut remap = vec![usize::MAX; self.n_cols];
        for (new, &old) in columns.iter().enumerate() {
            if old >= self.n_cols {
                return Err(Error::InvalidData(format!(
                    "selected column {old} out of range for {} columns",
                    self.n_cols
                )));
            }
            if remap[old] != usize::MAX {
                return Err(Error::InvalidData(format!("column {old} selected twice")));
            }
            remap[old] = new;
        }
        let rows: Vec<Vec<(usize, f64)>> = self
            .rows()
            .map(|(cols, vals)| {
                let mut row: Vec<(usize, f64)> = cols
                    .iter()
                    .zip(vals)
                    .filter(|(&c, _)| remap[c] != usize::MAX)
                    .map(|(&c, &v)| (remap[c], v))
                    .collect();
                row.sort_unstable_by_key(|&(c, _)| c);
                row
            })
            .collect();
        Self::from_rows(columns.len(), &rows)
    }
}

/// Replaces every stored value by 1, keeping the sparsity pattern.
pub fn binarize(x: &SparseCountMatrix) -> SparseCountMatrix {
    SparseCountMatrix {
        values: vec![1.0; x.values.len()],
        ..x.clone()
    }
}

/// A feature matrix together with one label per row.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    x: SparseCountMatrix,
    y: Vec<Label>,
}

impl LabeledDataset {
    pub fn new(x: SparseCountMatrix, y: Vec<Label>) -> Result<Self> {
        if y.len() != x.n_rows() {
            return Err(Error::InvalidData(format!(
                "{} labels for {} rows",
                y.len(),
                x.n_rows()
            )));
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &SparseCountMatrix {
        &self.x
    }

    pub fn y(&self) -> &[Label] {
        &self.y
    }

    pub fn n_features(&self) -> usize {
        self.x.n_cols()
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn binarized(&self) -> Self {
        Self {
            x: binarize(&self.x),
            y: self.y.clone(),
        }
    }

    pub fn select_columns(&self, columns: &[usize]) -> Result<Self> {
        Ok(Self {
            x: self.x.select_columns(columns)?,
            y: self.y.clone(),
        })
    }

    /// Fraction of rows where `predicted` agrees with the stored label.
    pub fn accuracy(&self, predicted: &[Label]) -> Result<f64> {
        if predicted.len() != self.y.len() {
            return Err(Error::InvalidData(format!(
                "{} predictions for {} rows",
                predicted.len(),
                self.y.len()
            )));
        }
        if self.y.is_empty() {
            return Ok(0.0);
        }
        let correct = predicted.iter().zip(&self.y).filter(|(a, b)| a == b).count();
        Ok(correct as f64 / self.y.len() as f64)
    }
}

/// Per-class column sums `f_plus`, `f_minus` and class sizes. These are the
/// sufficient statistics for every fit in the crate.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSummary {
    f_plus: Vec<f64>,
    f_minus: Vec<f64>,
    n_plus: usize,
    n_minus: usize,
}

impl ClassSummary {
    pub fn new(f_plus: Vec<f64>, f_minus: Vec<f64>, n_plus: usize, n_minus: usize) -> Result<Self> {
        if f_plus.len() != f_minus.len() {
            return Err(Error::dims("data_model", f_plus.len(), f_minus.len()));
        }
        if n_plus == 0 {
            return Err(Error::DegenerateLabels("positive"));
        }
        if n_minus == 0 {
            return Err(Error::DegenerateLabels("negative"));
        }
        if let Some(v) = f_plus
            .iter()
            .chain(&f_minus)
            .find(|v| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidData(format!(
                "class sums must be finite and non-negative, found {v}"
            )));
        }
        Ok(Self {
            f_plus,
            f_minus,
            n_plus,
            n_minus,
        })
    }

    pub fn m(&self) -> usize {
        self.f_plus.len()
    }

    pub fn f_plus(&self) -> &[f64] {
        &self.f_plus
    }

    pub fn f_minus(&self) -> &[f64] {
        &self.f_minus
    }

    pub fn n_plus(&self) -> usize {
        self.n_plus
    }

    pub fn n_minus(&self) -> usize {
        self.n_minus
    }

    pub fn n(&self) -> usize {
        self.n_plus + self.n_minus
    }

    /// `ln(n_plus / n_minus)`.
    pub fn log_prior_ratio(&self) -> f64 {
        (self.n_plus as f64).ln() - (self.n_minus as f64).ln()
    }

    /// Copy with `gamma` added to every class sum (class sizes unchanged).
    pub fn smoothed(&self, gamma: f64) -> Self {
        if gamma == 0.0 {
            return self.clone();
        }
        Self {
            f_plus: self.f_plus.iter().map(|f| f + gamma).collect(),
            f_minus: self.f_minus.iter().map(|f| f + gamma).collect(),
            ..*self
        }
    }

    /// The summary with the class roles exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            f_plus: self.f_minus.clone(),
            f_minus: self.f_plus.clone(),
            n_plus: self.n_minus,
            n_minus: self.n_plus,
        }
    }

    pub(crate) fn has_zero_counts(&self) -> bool {
        self.f_plus.iter().chain(&self.f_minus).any(|&f| f == 0.0)
    }
}

/// Computes the per-class column sums and class sizes in one pass over the
/// stored entries.
pub fn summarize(ds: &LabeledDataset) -> Result<ClassSummary> {
    let m = ds.n_features();
    let mut f_plus = vec![0.0; m];
    let mut f_minus = vec![0.0; m];
    let (mut n_plus, mut n_minus) = (0, 0);
    for ((cols, vals), &label) in ds.x.rows().zip(&ds.y) {
        let target = match label {
            Label::Positive => {
                n_plus += 1;
                &mut f_plus
            }
            Label::Negative => {
                n_minus += 1;
                &mut f_minus
            }
        };
        for (&c, &v) in cols.iter().zip(vals) {
            target[c] += v;
        }
    }
    ClassSummary::new(f_plus, f_minus, n_plus, n_minus)
}
