//! File formats: svmlight data, JSON model files, CSV reports and plain
//! index/label lists.

mod model_file;
mod reports;
mod svmlight;

use std::io::Write;

pub use model_file::{FittedModel, ModelFile, ModelKind, MODEL_FILE_VERSION};
pub use reports::{format_number, write_gap_csv, write_pipeline_csv, write_scaling_csv};
pub use svmlight::{parse_svmlight, read_svmlight, write_svmlight};

use crate::{Label, Result};

/// One index per line.
pub fn write_indices<W: Write>(mut w: W, indices: &[usize]) -> Result<()> {
    for i in indices {
        writeln!(w, "{i}")?;
    }
    w.flush()?;
    Ok(())
}

/// One `+1` or `-1` per line.
pub fn write_labels<W: Write>(mut w: W, labels: &[Label]) -> Result<()> {
    for l in labels {
        writeln!(w, "{l}")?;
    }
    w.flush()?;
    Ok(())
}
