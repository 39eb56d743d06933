use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::{Error, Label, LabeledDataset, Result, SparseCountMatrix};

/// Reads `<label> <index>:<value> ...` lines with 1-based, strictly
/// increasing indices. Labels are `+1`/`-1` or `1`/`0`; text after `#` is
/// ignored. The feature count is `dims` when given, otherwise the largest
/// index seen.
pub fn parse_svmlight<R: BufRead>(reader: R, dims: Option<usize>) -> Result<LabeledDataset> {
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut labels = Vec::new();
    let mut max_index = 0;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let err = |msg: String| Error::Parse { line: lineno, msg };
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let label_tok = tokens.next().expect("non-empty line has a token");
        let label = match label_tok.parse::<f64>() {
            Ok(1.0) => Label::Positive,
            Ok(-1.0 | 0.0) => Label::Negative,
            _ => return Err(err(format!("invalid label {label_tok:?}"))),
        };
        let mut row = Vec::new();
        let mut prev = 0;
        for tok in tokens {
            let (idx, val) = tok
                .split_once(':')
                .ok_or_else(|| err(format!("expected index:value, got {tok:?}")))?;
            let idx: usize = idx
                .parse()
                .map_err(|_| err(format!("invalid index {idx:?}")))?;
            if idx == 0 {
                return Err(err("indices are 1-based; got 0".into()));
            }
            if idx <= prev {
                return Err(err(format!("index {idx} does not increase (previous {prev})")));
            }
            let val: f64 = val
                .parse()
                .map_err(|_| err(format!("invalid value {val:?}")))?;
            if !val.is_finite() || val < 0.0 {
                return Err(err(format!("value {val} must be finite and non-negative")));
            }
            if let Some(d) = dims {
                if idx > d {
                    return Err(err(format!("index {idx} exceeds dims = {d}")));
                }
            }
            prev = idx;
            if val != 0.0 {
                row.push((idx - 1, val));
            }
        }
        max_index = max_index.max(prev);
        rows.push(row);
        labels.push(label);
    }
    if rows.is_empty() {
        return Err(Error::NoRecords);
    }
    let m = dims.unwrap_or(max_index);
    LabeledDataset::new(SparseCountMatrix::from_rows(m, &rows)?, labels)
}

pub fn read_svmlight(path: impl AsRef<Path>, dims: Option<usize>) -> Result<LabeledDataset> {
    parse_svmlight(BufReader::new(File::open(path)?), dims)
}

/// Writes values in shortest round-trip form so that reading back is exact.
pub fn write_svmlight<W: Write>(mut w: W, ds: &LabeledDataset) -> Result<()> {
    for ((cols, vals), label) in ds.x().rows().zip(ds.y()) {
        write!(w, "{label}")?;
        for (c, v) in cols.iter().zip(vals) {
            write!(w, " {}:{}", c + 1, v)?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}
