//! Deterministic line-chart rasterization.
//!
//! Rendering is done in-repo so the data-to-pixel transform is known exactly;
//! `PlotGeometry` carries that transform out alongside the image.

use crate::dataset::{ChartGroundTruth, ColorMode, LegendPlacement};
use crate::error::{Error, Result};
use crate::font;
use crate::raster::{RasterImage, Rgb, BLACK, WHITE};

const GRID_COLOR: Rgb = [214, 214, 214];
const SERIES_COLORS: [Rgb; 5] =
    [[31, 119, 180], [214, 39, 40], [44, 160, 44], [255, 127, 14], [148, 103, 189]];
const DASH_PATTERNS: [Option<&[f64]>; 5] = [
    None,
    Some(&[7.0, 4.0]),
    Some(&[2.0, 3.0]),
    Some(&[9.0, 3.0, 2.0, 3.0]),
    Some(&[4.0, 4.0]),
];

const PAD: i64 = 8;
const TICK_LEN: i64 = 4;
const TITLE_SCALE: u32 = 2;
const TEXT_SCALE: u32 = 1;
const LINE_THICKNESS: u32 = 2;

/// Plot-area pixel bounds plus the affine data-to-pixel transform.
///
/// `left..=right` and `top..=bottom` are inclusive pixel bounds; the axis
/// minimum maps to the bottom-left corner, the maximum to the top-right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotGeometry {
    pub left: f64,
    pub top: f64,
    pub right: f64,
    pub bottom: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl PlotGeometry {
    /// Maps a data point to (fractional) pixel coordinates.
    pub fn to_pixel(&self, x: f64, y: f64) -> (f64, f64) {
        let px = self.left + (x - self.x_min) / (self.x_max - self.x_min) * (self.right - self.left);
        let py =
            self.bottom - (y - self.y_min) / (self.y_max - self.y_min) * (self.bottom - self.top);
        (px, py)
    }

    /// Inverse of [`to_pixel`](Self::to_pixel).
    pub fn to_data(&self, px: f64, py: f64) -> (f64, f64) {
        let x = self.x_min + (px - self.left) / (self.right - self.left) * (self.x_max - self.x_min);
        let y = self.y_min + (self.bottom - py) / (self.bottom - self.top) * (self.y_max - self.y_min);
        (x, y)
    }

    /// Whether a pixel coordinate lies within the plot rectangle.
    pub fn contains_pixel(&self, px: f64, py: f64) -> bool {
        px >= self.left && px <= self.right && py >= self.top && py <= self.bottom
    }

    /// Data units spanned by one pixel, per axis.
    pub fn data_units_per_pixel(&self) -> (f64, f64) {
        (
            (self.x_max - self.x_min) / (self.right - self.left),
            (self.y_max - self.y_min) / (self.bottom - self.top),
        )
    }
}

/// Rasterizes a chart per its style and returns the image together with the
/// exact plot geometry used.
pub fn render_chart(gt: &ChartGroundTruth) -> Result<(RasterImage, PlotGeometry)> {
    gt.validate().map_err(|e| Error::Render(e.to_string()))?;

    let w = gt.style.width_px as i64;
    let h = gt.style.height_px as i64;
    let mut img = RasterImage::new(gt.style.width_px, gt.style.height_px, WHITE);

    let x_ticks = nice_ticks(gt.x_axis.min, gt.x_axis.max, 6);
    let y_ticks = nice_ticks(gt.y_axis.min, gt.y_axis.max, 6);

    // Left margin must fit the rotated axis label plus the widest tick label.
    let y_tick_w = y_ticks
        .labels
        .iter()
        .map(|l| font::text_width(l, TEXT_SCALE) as i64)
        .max()
        .unwrap_or(0);
    let margin_left = PAD + font::text_height(TEXT_SCALE) as i64 + PAD + y_tick_w + 3 + TICK_LEN;
    let margin_top = PAD + font::text_height(TITLE_SCALE) as i64 + PAD;
    let margin_bottom =
        TICK_LEN + 3 + font::text_height(TEXT_SCALE) as i64 + PAD + font::text_height(TEXT_SCALE) as i64 + PAD;
    let legend_w = legend_width(gt);
    let margin_right = match gt.style.legend {
        LegendPlacement::OutsidePlot => PAD + legend_w + PAD,
        LegendPlacement::InsidePlot => PAD + 4,
    };

    let plot_left = margin_left;
    let plot_right = w - 1 - margin_right;
    let plot_top = margin_top;
    let plot_bottom = h - 1 - margin_bottom;
    if plot_right - plot_left < 40 || plot_bottom - plot_top < 40 {
        return Err(Error::Render(format!(
            "image {}x{} leaves no room for the plot area",
            w, h
        )));
    }

    let geometry = PlotGeometry {
        left: plot_left as f64,
        top: plot_top as f64,
        right: plot_right as f64,
        bottom: plot_bottom as f64,
        x_min: gt.x_axis.min,
        x_max: gt.x_axis.max,
        y_min: gt.y_axis.min,
        y_max: gt.y_axis.max,
    };

    if gt.style.gridlines {
        for &tx in &x_ticks.values {
            let (px, _) = geometry.to_pixel(tx, gt.y_axis.min);
            let col = px.round() as i64;
            if col > plot_left && col < plot_right {
                draw_vline(&mut img, col, plot_top + 1, plot_bottom - 1, GRID_COLOR);
            }
        }
        for &ty in &y_ticks.values {
            let (_, py) = geometry.to_pixel(gt.x_axis.min, ty);
            let row = py.round() as i64;
            if row > plot_top && row < plot_bottom {
                draw_hline(&mut img, row, plot_left + 1, plot_right - 1, GRID_COLOR);
            }
        }
    }

    draw_rect(&mut img, plot_left, plot_top, plot_right, plot_bottom, BLACK);

    // Tick marks and labels.
    for (tx, label) in x_ticks.values.iter().zip(&x_ticks.labels) {
        let (px, _) = geometry.to_pixel(*tx, gt.y_axis.min);
        let col = px.round() as i64;
        draw_vline(&mut img, col, plot_bottom + 1, plot_bottom + TICK_LEN, BLACK);
        let lw = font::text_width(label, TEXT_SCALE) as i64;
        font::draw_text(&mut img, col - lw / 2, plot_bottom + TICK_LEN + 3, label, TEXT_SCALE, BLACK);
    }
    for (ty, label) in y_ticks.values.iter().zip(&y_ticks.labels) {
        let (_, py) = geometry.to_pixel(gt.x_axis.min, *ty);
        let row = py.round() as i64;
        draw_hline(&mut img, row, plot_left - TICK_LEN, plot_left - 1, BLACK);
        let lw = font::text_width(label, TEXT_SCALE) as i64;
        let lh = font::text_height(TEXT_SCALE) as i64;
        font::draw_text(&mut img, plot_left - TICK_LEN - 3 - lw, row - lh / 2, label, TEXT_SCALE, BLACK);
    }

    // Series polylines.
    for (i, series) in gt.series.iter().enumerate() {
        let pts: Vec<(f64, f64)> =
            series.points.iter().map(|&(x, y)| geometry.to_pixel(x, y)).collect();
        let (color, dash) = series_stroke(gt, i);
        draw_polyline(&mut img, &pts, color, LINE_THICKNESS, dash);
    }

    draw_legend(&mut img, gt, plot_left, plot_top, plot_right, legend_w, w);

    // Title and axis labels.
    let title_w = font::text_width(&gt.title, TITLE_SCALE) as i64;
    let plot_cx = (plot_left + plot_right) / 2;
    font::draw_text(&mut img, plot_cx - title_w / 2, PAD, &gt.title, TITLE_SCALE, BLACK);

    let x_label = gt.x_axis.display_label();
    let xl_w = font::text_width(&x_label, TEXT_SCALE) as i64;
    font::draw_text(
        &mut img,
        plot_cx - xl_w / 2,
        h - PAD - font::text_height(TEXT_SCALE) as i64,
        &x_label,
        TEXT_SCALE,
        BLACK,
    );

    let y_label = gt.y_axis.display_label();
    let yl_h = font::text_width(&y_label, TEXT_SCALE) as i64; // rotated box height
    let plot_cy = (plot_top + plot_bottom) / 2;
    font::draw_text_rotated(&mut img, PAD, plot_cy - yl_h / 2, &y_label, TEXT_SCALE, BLACK);

    Ok((img, geometry))
}

fn series_stroke(gt: &ChartGroundTruth, index: usize) -> (Rgb, Option<&'static [f64]>) {
    match gt.style.color_mode {
        ColorMode::Color => (SERIES_COLORS[index % SERIES_COLORS.len()], None),
        ColorMode::Monochrome => (BLACK, DASH_PATTERNS[index % DASH_PATTERNS.len()]),
    }
}

fn legend_width(gt: &ChartGroundTruth) -> i64 {
    let name_w = gt
        .series
        .iter()
        .map(|s| font::text_width(&s.name, TEXT_SCALE) as i64)
        .max()
        .unwrap_or(0);
    16 + 4 + name_w + 2 * 4
}

fn draw_legend(
    img: &mut RasterImage,
    gt: &ChartGroundTruth,
    plot_left: i64,
    plot_top: i64,
    plot_right: i64,
    legend_w: i64,
    image_w: i64,
) {
    let row_h = font::text_height(TEXT_SCALE) as i64 + 4;
    let box_h = gt.series.len() as i64 * row_h + 4;
    let (bx, by) = match gt.style.legend {
        LegendPlacement::InsidePlot => (plot_right - legend_w - 6, plot_top + 6),
        LegendPlacement::OutsidePlot => (image_w - PAD - legend_w, plot_top),
    };
    let _ = plot_left;

    // Opaque background keeps legend text readable over series lines.
    for y in by..by + box_h {
        draw_hline(img, y, bx, bx + legend_w - 1, WHITE);
    }
    draw_rect(img, bx, by, bx + legend_w - 1, by + box_h - 1, BLACK);

    for (i, series) in gt.series.iter().enumerate() {
        let cy = by + 2 + i as i64 * row_h + row_h / 2;
        let (color, dash) = series_stroke(gt, i);
        let sample =
            [(bx as f64 + 4.0, cy as f64), (bx as f64 + 16.0, cy as f64)];
        draw_polyline(img, &sample, color, LINE_THICKNESS, dash);
        font::draw_text(
            img,
            bx + 16 + 4,
            cy - font::text_height(TEXT_SCALE) as i64 / 2,
            &series.name,
            TEXT_SCALE,
            BLACK,
        );
    }
}

struct Ticks {
    values: Vec<f64>,
    labels: Vec<String>,
}

/// Round-number tick positions inside [lo, hi], aiming for ~`target` ticks.
fn nice_ticks(lo: f64, hi: f64, target: usize) -> Ticks {
    let step = nice_num((hi - lo) / (target.max(2) - 1) as f64, true);
    let start = (lo / step).ceil() * step;
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut k = 0;
    loop {
        let v = start + step * k as f64;
        if v > hi + step * 1e-9 {
            break;
        }
        let v = if v.abs() < step * 1e-9 { 0.0 } else { v };
        values.push(v);
        labels.push(format!("{v:.decimals$}"));
        k += 1;
    }
    Ticks { values, labels }
}

fn nice_num(x: f64, round: bool) -> f64 {
    let exp = x.log10().floor();
    let base = 10f64.powf(exp);
    let f = x / base;
    let nf = if round {
        if f < 1.5 {
            1.0
        } else if f < 3.0 {
            2.0
        } else if f < 7.0 {
            5.0
        } else {
            10.0
        }
    } else if f <= 1.0 {
        1.0
    } else if f <= 2.0 {
        2.0
    } else if f <= 5.0 {
        5.0
    } else {
        10.0
    };
    nf * base
}

fn draw_hline(img: &mut RasterImage, y: i64, x0: i64, x1: i64, color: Rgb) {
    for x in x0..=x1 {
        img.set_clipped(x, y, color);
    }
}

fn draw_vline(img: &mut RasterImage, x: i64, y0: i64, y1: i64, color: Rgb) {
    for y in y0..=y1 {
        img.set_clipped(x, y, color);
    }
}

fn draw_rect(img: &mut RasterImage, x0: i64, y0: i64, x1: i64, y1: i64, color: Rgb) {
    draw_hline(img, y0, x0, x1, color);
    draw_hline(img, y1, x0, x1, color);
    draw_vline(img, x0, y0, y1, color);
    draw_vline(img, x1, y0, y1, color);
}

/// Draws a polyline in ~1 px steps, honoring an on/off dash pattern measured
/// along the curve, stamping `thickness`-square dots.
fn draw_polyline(
    img: &mut RasterImage,
    pts: &[(f64, f64)],
    color: Rgb,
    thickness: u32,
    dash: Option<&[f64]>,
) {
    if pts.len() == 1 {
        stamp(img, pts[0].0, pts[0].1, thickness, color);
        return;
    }
    let mut travelled = 0.0;
    for seg in pts.windows(2) {
        let (x0, y0) = seg[0];
        let (x1, y1) = seg[1];
        let len = ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt();
        let steps = len.ceil().max(1.0) as usize;
        for k in 0..=steps {
            let t = k as f64 / steps as f64;
            if dash_on(dash, travelled + len * t) {
                stamp(img, x0 + (x1 - x0) * t, y0 + (y1 - y0) * t, thickness, color);
            }
        }
        travelled += len;
    }
}

fn dash_on(dash: Option<&[f64]>, s: f64) -> bool {
    let Some(pattern) = dash else { return true };
    let total: f64 = pattern.iter().sum();
    if total <= 0.0 {
        return true;
    }
    let mut pos = s % total;
    for (i, seg) in pattern.iter().enumerate() {
        if pos < *seg {
            return i % 2 == 0;
        }
        pos -= seg;
    }
    true
}

fn stamp(img: &mut RasterImage, cx: f64, cy: f64, thickness: u32, color: Rgb) {
    let x0 = (cx - (thickness as f64 - 1.0) / 2.0).round() as i64;
    let y0 = (cy - (thickness as f64 - 1.0) / 2.0).round() as i64;
    for dy in 0..thickness as i64 {
        for dx in 0..thickness as i64 {
            img.set_clipped(x0 + dx, y0 + dy, color);
        }
    }
}
