//! SVG line plots and the phase heat map.

use std::path::Path;

use anyhow::{anyhow, Result};
use koranyi_core::evolve::{CellStatus, SweepRow};
use plotters::prelude::*;

const SIZE: (u32, u32) = (720, 480);
const PALETTE: [RGBColor; 4] = [RGBColor(31, 119, 180), RGBColor(214, 39, 40), RGBColor(44, 160, 44), RGBColor(148, 103, 189)];

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = ((hi - lo) * 0.05).max(1e-9 * lo.abs().max(1.0));
    (lo - pad, hi + pad)
}

/// A named series drawn as a line, or as markers when `markers` is set.
pub struct Series<'a> {
    pub label: &'a str,
    pub points: Vec<(f64, f64)>,
    pub markers: bool,
}

pub fn line_plot(path: &Path, title: &str, x_label: &str, y_label: &str, series: &[Series]) -> Result<()> {
    let all = || series.iter().flat_map(|s| s.points.iter());
    let (x0, x1) = bounds(all().map(|p| p.0));
    let (y0, y1) = bounds(all().map(|p| p.1));
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(|e| anyhow!("{e}"))?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 18))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(x0..x1, y0..y1)
        .map_err(|e| anyhow!("{e}"))?;
    chart
        .configure_mesh()
        .x_desc(x_label)
        .y_desc(y_label)
        .draw()
        .map_err(|e| anyhow!("{e}"))?;
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts = s.points.iter().copied().filter(|p| p.0.is_finite() && p.1.is_finite());
        let anno = if s.markers {
            chart
                .draw_series(pts.map(|p| Circle::new(p, 4, color.filled())))
                .map_err(|e| anyhow!("{e}"))?
        } else {
            chart.draw_series(LineSeries::new(pts, color.stroke_width(2))).map_err(|e| anyhow!("{e}"))?
        };
        anno.label(s.label)
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 16, y)], color.stroke_width(2)));
    }
    chart
        .configure_series_labels()
        .border_style(BLACK)
        .background_style(WHITE.mix(0.8))
        .draw()
        .map_err(|e| anyhow!("{e}"))?;
    root.present().map_err(|e| anyhow!("{e}"))?;
    Ok(())
}

fn status_color(s: CellStatus) -> RGBColor {
    match s {
        CellStatus::Completed => RGBColor(120, 190, 120),
        CellStatus::BlownUp => RGBColor(220, 90, 80),
        CellStatus::Running => RGBColor(240, 200, 80),
        CellStatus::Failed => RGBColor(170, 170, 170),
    }
}

/// Cell edges around sorted distinct centers.
fn edges(centers: &[f64]) -> Vec<f64> {
    if centers.len() == 1 {
        return vec![centers[0] - 0.5, centers[0] + 0.5];
    }
    let n = centers.len();
    let mut e = vec![centers[0] - 0.5 * (centers[1] - centers[0])];
    e.extend(centers.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    e.push(centers[n - 1] + 0.5 * (centers[n - 1] - centers[n - 2]));
    e
}

fn distinct(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Heat map over `(λ, a)` of the rows with exponent `p`, colored by
/// simulator status. Markers give the classifier verdict (filled:
/// nonexistence, hollow: existence, cross: open) and `frontier` is drawn as
/// a line.
pub fn phase_heat_map(path: &Path, rows: &[SweepRow], p: f64, frontier: &[(f64, f64)]) -> Result<()> {
    let rows: Vec<&SweepRow> = rows.iter().filter(|r| r.p == p).collect();
    let lambdas = distinct(rows.iter().map(|r| r.lambda).collect());
    let a_list = distinct(rows.iter().map(|r| r.a).collect());
    if lambdas.is_empty() {
        return Err(anyhow!("no sweep rows with p = {p}"));
    }
    let (ex, ey) = (edges(&lambdas), edges(&a_list));
    let (x0, x1) = (ex[0], *ex.last().unwrap());
    let (y0, y1) = (ey[0], *ey.last().unwrap());
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(|e| anyhow!("{e}"))?;
    let mut chart = ChartBuilder::on(&root)
        .caption(format!("simulated status, p = {p} (illustrative)"), ("sans-serif", 18))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(50)
        .build_cartesian_2d(x0..x1, y0..y1)
        .map_err(|e| anyhow!("{e}"))?;
    chart.configure_mesh().x_desc("lambda").y_desc("a").draw().map_err(|e| anyhow!("{e}"))?;
    let index = |v: &[f64], x: f64| v.iter().position(|&c| c == x).unwrap_or(0);
    chart
        .draw_series(rows.iter().map(|r| {
            let (i, j) = (index(&lambdas, r.lambda), index(&a_list, r.a));
            Rectangle::new([(ex[i], ey[j]), (ex[i + 1], ey[j + 1])], status_color(r.status).filled())
        }))
        .map_err(|e| anyhow!("{e}"))?;
    for r in &rows {
        let at = (r.lambda, r.a);
        let done = match r.classifier_verdict.as_str() {
            "NonexistenceAllF" => chart.draw_series(std::iter::once(Circle::new(at, 5, BLACK.filled()))).map(|_| ()),
            "ExistenceWitness" => chart.draw_series(std::iter::once(Circle::new(at, 5, BLACK.stroke_width(2)))).map(|_| ()),
            _ => chart.draw_series(std::iter::once(Cross::new(at, 5, BLACK.stroke_width(2)))).map(|_| ()),
        };
        done.map_err(|e| anyhow!("{e}"))?;
    }
    let inside: Vec<(f64, f64)> = frontier.iter().copied().filter(|&(x, y)| x >= x0 && x <= x1 && y >= y0 && y <= y1).collect();
    chart
        .draw_series(LineSeries::new(inside, BLACK.stroke_width(2)))
        .map_err(|e| anyhow!("{e}"))?
        .label("classifier frontier")
        .legend(|(x, y)| PathElement::new(vec![(x, y), (x + 16, y)], BLACK.stroke_width(2)));
    chart
        .configure_series_labels()
        .border_style(BLACK)
        .background_style(WHITE.mix(0.8))
        .draw()
        .map_err(|e| anyhow!("{e}"))?;
    root.present().map_err(|e| anyhow!("{e}"))?;
    Ok(())
}
