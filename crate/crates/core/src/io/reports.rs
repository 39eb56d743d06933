use std::io::Write;

use crate::experiments::{GapCurve, PipelineReport, ScalingReport};
use crate::Result;

/// Scientific notation with 17 significant digits.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), format_number)
}

pub fn write_gap_csv<W: Write>(w: W, curve: &GapCurve) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["k", "psi_k", "psi_km4", "primal_value", "a_posteriori_gap", "delta"])?;
    for r in &curve.rows {
        out.write_record([
            r.k.to_string(),
            format_number(r.psi_k),
            opt(r.psi_km4),
            format_number(r.primal_value),
            format_number(r.a_posteriori_gap),
            opt(r.delta),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// `selected` is written as space-separated indices.
pub fn write_pipeline_csv<W: Write>(w: W, reports: &[PipelineReport]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["method", "k", "sparsity_pct", "selected", "stage2_accuracy", "fit_seconds"])?;
    for r in reports {
        let selected: Vec<String> = r.selected.iter().map(usize::to_string).collect();
        out.write_record([
            r.method.name().to_string(),
            r.k.to_string(),
            format_number(r.sparsity_pct),
            selected.join(" "),
            format_number(r.stage2_accuracy),
            format_number(r.fit_seconds),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_scaling_csv<W: Write>(w: W, report: &ScalingReport) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["m", "k", "seconds"])?;
    for p in &report.points {
        out.write_record([p.m.to_string(), p.k.to_string(), format_number(p.seconds)])?;
    }
    out.flush()?;
    Ok(())
}
