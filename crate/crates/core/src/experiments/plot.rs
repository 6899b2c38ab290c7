//! SVG figures drawn from the report: surrogate versus pass (per scheme and sweep point,
//! averaged over seeds) and mean radar SINR versus the swept quantity. The CSVs are the
//! reference output; these are for a quick look.

use std::path::{Path, PathBuf};

use plotters::prelude::*;

use super::{ExperimentReport, SweepAxis};
use crate::baselines::SchemeTag;
use crate::error::{DfrcError, Result};
use crate::linalg::linear_to_db;

const SIZE: (u32, u32) = (720, 480);

fn plot_err<E: std::fmt::Debug>(e: E) -> DfrcError {
    DfrcError::Numerical(format!("plot: {e:?}"))
}

fn color(i: usize) -> RGBColor {
    const PALETTE: [RGBColor; 6] = [
        RGBColor(31, 119, 180),
        RGBColor(255, 127, 14),
        RGBColor(44, 160, 44),
        RGBColor(214, 39, 40),
        RGBColor(148, 103, 189),
        RGBColor(140, 86, 75),
    ];
    PALETTE[i % PALETTE.len()]
}

/// `(lo, hi)` with a margin, never degenerate.
fn padded(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = ((hi - lo) * 0.08).max(0.5);
    (lo - pad, hi + pad)
}

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

fn line_chart(path: &Path, title: &str, x_label: &str, y_label: &str, series: &[Series]) -> Result<()> {
    let (x0, x1) = padded(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let (y0, y1) = padded(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 20))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(x0..x1, y0..y1)
        .map_err(plot_err)?;
    chart
        .configure_mesh()
        .x_desc(x_label)
        .y_desc(y_label)
        .draw()
        .map_err(plot_err)?;
    for (i, s) in series.iter().enumerate() {
        let c = color(i);
        let pts: Vec<(f64, f64)> = s.points.iter().copied().filter(|p| p.1.is_finite()).collect();
        chart
            .draw_series(LineSeries::new(pts.clone(), c.stroke_width(2)))
            .map_err(plot_err)?
            .label(s.label.clone())
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 16, y)], c.stroke_width(2)));
        chart
            .draw_series(pts.into_iter().map(|p| Circle::new(p, 3, c.filled())))
            .map_err(plot_err)?;
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .position(SeriesLabelPosition::LowerRight)
        .draw()
        .map_err(plot_err)?;
    root.present().map_err(plot_err)?;
    Ok(())
}

fn axis_label(axis: SweepAxis) -> &'static str {
    match axis {
        SweepAxis::None | SweepAxis::Power => "P_t (dBm)",
        SweepAxis::Qos => "γ (dB)",
        SweepAxis::Antennas => "N",
    }
}

/// Mean surrogate (dB) per pass over the seeds of one (scheme, sweep point). Shorter runs
/// are held at their final value.
fn mean_convergence(report: &ExperimentReport, scheme: SchemeTag, value: f64) -> Vec<(f64, f64)> {
    let runs: Vec<Vec<f64>> = report
        .traces
        .iter()
        .filter(|t| t.scheme == scheme && t.sweep_value == value)
        .map(|t| t.trace.passes.iter().map(|p| linear_to_db(p.surrogate)).collect())
        .collect();
    let len = runs.iter().map(Vec::len).max().unwrap_or(0);
    (0..len)
        .map(|i| {
            let sum: f64 = runs.iter().map(|r| r[i.min(r.len() - 1)]).sum();
            (i as f64, sum / runs.len() as f64)
        })
        .collect()
}

pub fn write_plots(report: &ExperimentReport, dir: &Path) -> Result<Vec<PathBuf>> {
    let axis = report.spec.sweep.axis;
    let points = report.spec.sweep.points(&report.spec.scenario);
    let mut files = Vec::new();

    let mut series = Vec::new();
    for &scheme in &report.spec.schemes {
        for &value in &points {
            let pts = mean_convergence(report, scheme, value);
            if pts.is_empty() {
                continue;
            }
            let label = match axis {
                SweepAxis::None => scheme.name().to_string(),
                SweepAxis::Antennas => format!("{} N={}", scheme.name(), value as usize),
                _ => format!("{} {}={}", scheme.name(), axis.column(), value),
            };
            series.push(Series { label, points: pts });
        }
    }
    let path = dir.join("convergence.svg");
    line_chart(&path, "Radar SINR surrogate versus pass", "pass", "surrogate (dB)", &series)?;
    files.push(path);

    if axis != SweepAxis::None {
        let series: Vec<Series> = report
            .spec
            .schemes
            .iter()
            .map(|&scheme| Series {
                label: scheme.name().to_string(),
                points: points
                    .iter()
                    .filter_map(|&v| report.summary_at(scheme, v).map(|s| (v, s.mean_radar_sinr_db)))
                    .collect(),
            })
            .collect();
        let path = dir.join(format!("sinr_vs_{}.svg", axis.name()));
        line_chart(&path, "Mean radar SINR", axis_label(axis), "radar SINR (dB)", &series)?;
        files.push(path);
    }
    Ok(files)
}
