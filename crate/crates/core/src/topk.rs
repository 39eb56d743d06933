use std::cmp::Ordering;

use crate::{Error, Result};

/// Descending by value, ascending by index on ties.
#[inline]
fn rank_order(z: &[f64], a: usize, b: usize) -> Ordering {
    z[b].total_cmp(&z[a]).then(a.cmp(&b))
}

/// Sum of the `k` largest entries of `z`, in expected `O(m)` time.
pub fn topk_sum(z: &[f64], k: usize) -> Result<f64> {
    if k > z.len() {
        return Err(Error::cardinality("multinomial", k, z.len()));
    }
    let mut buf = z.to_vec();
    Ok(topk_sum_in_place(&mut buf, k))
}

/// Same as [`topk_sum`] but reorders `buf` instead of copying it.
pub(crate) fn topk_sum_in_place(buf: &mut [f64], k: usize) -> f64 {
    debug_assert!(k <= buf.len());
    if k == 0 {
        return 0.0;
    }
    if k < buf.len() {
        buf.select_nth_unstable_by(k - 1, |a, b| b.total_cmp(a));
    }
    buf[..k].iter().sum()
}

/// Indices of the `k` largest entries of `z`, returned in ascending index
/// order. Among equal values the lower index wins.
pub fn top_k_indices(z: &[f64], k: usize) -> Result<Vec<usize>> {
    let m = z.len();
    if k > m {
        return Err(Error::cardinality("multinomial", k, m));
    }
    let mut idx: Vec<usize> = (0..m).collect();
    if k == 0 {
        return Ok(Vec::new());
    }
    if k < m {
        idx.select_nth_unstable_by(k - 1, |&a, &b| rank_order(z, a, b));
        idx.truncate(k);
    }
    idx.sort_unstable();
    Ok(idx)
}

/// All indices ordered by descending `z`, lower index first on ties.
pub(crate) fn descending_order(z: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..z.len()).collect();
    idx.sort_by(|&a, &b| rank_order(z, a, b));
    idx
}
