use std::path::Path;

use anyhow::{anyhow, Result};
use plotters::prelude::*;
use xfer_core::trainer::Sweep;

/// One labelled sweep to draw.
pub struct Series {
    pub label: String,
    pub sweep: Sweep,
}

/// One row per (series, fraction).
pub fn write_csv(path: &Path, series: &[Series]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "series",
        "fraction",
        "examples",
        "pretrained_mean",
        "pretrained_std",
        "scratch_mean",
        "scratch_std",
        "gap",
    ])?;
    for s in series {
        for r in &s.sweep.rows {
            w.write_record([
                s.label.clone(),
                r.fraction.to_string(),
                r.examples.to_string(),
                format!("{:.6}", r.pretrained_mean),
                format!("{:.6}", r.pretrained_std),
                format!("{:.6}", r.scratch_mean),
                format!("{:.6}", r.scratch_std),
                format!("{:.6}", r.gap()),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Top-1 against fine-tuning fraction (log scale), pretrained solid and
/// scratch dashed, one colour per series.
pub fn write_svg(path: &Path, title: &str, series: &[Series]) -> Result<()> {
    let rows = series.iter().flat_map(|s| &s.sweep.rows);
    let min_f = rows.clone().map(|r| r.fraction).fold(1.0, f64::min);
    let max_y = rows
        .map(|r| (r.pretrained_mean + r.pretrained_std).max(r.scratch_mean + r.scratch_std))
        .fold(0.0, f64::max);
    let root = SVGBackend::new(path, (800, 500)).into_drawing_area();
    let err = |e: DrawingAreaErrorKind<_>| anyhow!("plotting: {e}");
    root.fill(&WHITE).map_err(err)?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(15)
        .x_label_area_size(45)
        .y_label_area_size(55)
        .build_cartesian_2d((min_f * 0.8..1.1).log_scale(), 0.0..(max_y * 1.1).max(0.05))
        .map_err(err)?;
    chart
        .configure_mesh()
        .x_desc("fine-tuning fraction")
        .y_desc("top-1 accuracy")
        .x_label_formatter(&|x| format!("{:.0}%", x * 100.0))
        .draw()
        .map_err(err)?;
    for (i, s) in series.iter().enumerate() {
        let color = Palette99::pick(i).to_rgba();
        let pre: Vec<(f64, f64)> = s.sweep.rows.iter().map(|r| (r.fraction, r.pretrained_mean)).collect();
        let scr: Vec<(f64, f64)> = s.sweep.rows.iter().map(|r| (r.fraction, r.scratch_mean)).collect();
        chart
            .draw_series(LineSeries::new(pre.clone(), color.stroke_width(2)))
            .map_err(err)?
            .label(format!("{} pretrained", s.label))
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], color.stroke_width(2)));
        chart
            .draw_series(pre.iter().map(|&p| Circle::new(p, 3, color.filled())))
            .map_err(err)?;
        chart
            .draw_series(DashedLineSeries::new(scr.clone(), 6, 4, color.stroke_width(1)))
            .map_err(err)?
            .label(format!("{} scratch", s.label))
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], color.stroke_width(1)));
        chart
            .draw_series(scr.iter().map(|&p| TriangleMarker::new(p, 3, color)))
            .map_err(err)?;
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .position(SeriesLabelPosition::LowerRight)
        .draw()
        .map_err(err)?;
    root.present().map_err(err)?;
    Ok(())
}
