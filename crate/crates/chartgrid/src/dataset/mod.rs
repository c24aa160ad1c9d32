//! Synthetic benchmark generation: ground-truth series, styled chart
//! rasterization, and gold-standard persistence.
//!
//! The gold standard is the exact source data each chart is rendered from,
//! so extraction accuracy can be measured against a perfectly known truth.

use std::path::Path;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod render;
pub mod signal;

pub use render::{render_chart, PlotGeometry};
pub use signal::{generate_series, linspace, SignalFamily, SignalSpec};

/// Hard cap on rendered image dimensions. Larger inputs get internally
/// downscaled by multimodal models, which destroys fine detail.
pub const MAX_IMAGE_DIM: u32 = 1200;

/// Schema version written into gold-standard files.
pub const GOLD_SCHEMA_VERSION: &str = "1";

/// One named data series with points ordered by strictly increasing x.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesData {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl SeriesData {
    pub fn xs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.0).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.1).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::InvalidData(format!("series {:?}: no points", self.name)));
        }
        for pair in self.points.windows(2) {
            if !(pair[0].0 < pair[1].0) {
                return Err(Error::InvalidData(format!(
                    "series {:?}: x values must be strictly increasing ({} then {})",
                    self.name, pair[0].0, pair[1].0
                )));
            }
        }
        Ok(())
    }
}

/// Axis metadata and data range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisInfo {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    pub min: f64,
    pub max: f64,
}

impl AxisInfo {
    /// Label with unit suffix, e.g. `Time (ms)`.
    pub fn display_label(&self) -> String {
        match &self.unit {
            Some(u) => format!("{} ({})", self.label, u),
            None => self.label.clone(),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.min < self.max) {
            return Err(Error::InvalidData(format!(
                "axis {:?}: min must be below max ({} vs {})",
                self.label, self.min, self.max
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorMode {
    Monochrome,
    Color,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LegendPlacement {
    InsidePlot,
    OutsidePlot,
}

/// Visual treatment of one chart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartStyle {
    pub color_mode: ColorMode,
    pub legend: LegendPlacement,
    pub gridlines: bool,
    pub width_px: u32,
    pub height_px: u32,
}

impl ChartStyle {
    fn validate(&self) -> Result<()> {
        if self.width_px.max(self.height_px) > MAX_IMAGE_DIM {
            return Err(Error::InvalidData(format!(
                "style: max dimension {} exceeds the {} px cap",
                self.width_px.max(self.height_px),
                MAX_IMAGE_DIM
            )));
        }
        if self.width_px < 320 || self.height_px < 240 {
            return Err(Error::InvalidData(format!(
                "style: {}x{} is too small to lay out a chart",
                self.width_px, self.height_px
            )));
        }
        Ok(())
    }
}

/// The four style variants every dataset must cover: black-and-white
/// rendering, legend inside the plot area, legend outside it, and gridlines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StyleVariant {
    Monochrome,
    InsideLegend,
    OutsideLegend,
    Gridlines,
}

impl StyleVariant {
    pub const ALL: [StyleVariant; 4] = [
        StyleVariant::Monochrome,
        StyleVariant::InsideLegend,
        StyleVariant::OutsideLegend,
        StyleVariant::Gridlines,
    ];

    fn to_style(self, width_px: u32, height_px: u32) -> ChartStyle {
        let (color_mode, legend, gridlines) = match self {
            StyleVariant::Monochrome => (ColorMode::Monochrome, LegendPlacement::InsidePlot, false),
            StyleVariant::InsideLegend => (ColorMode::Color, LegendPlacement::InsidePlot, false),
            StyleVariant::OutsideLegend => (ColorMode::Color, LegendPlacement::OutsidePlot, false),
            StyleVariant::Gridlines => (ColorMode::Color, LegendPlacement::InsidePlot, true),
        };
        ChartStyle { color_mode, legend, gridlines, width_px, height_px }
    }

    /// Which variant a style realizes, for coverage scans.
    pub fn classify(style: &ChartStyle) -> StyleVariant {
        if style.color_mode == ColorMode::Monochrome {
            StyleVariant::Monochrome
        } else if style.legend == LegendPlacement::OutsidePlot {
            StyleVariant::OutsideLegend
        } else if style.gridlines {
            StyleVariant::Gridlines
        } else {
            StyleVariant::InsideLegend
        }
    }
}

/// One chart's exact source data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartGroundTruth {
    pub id: String,
    pub title: String,
    pub x_axis: AxisInfo,
    pub y_axis: AxisInfo,
    pub style: ChartStyle,
    pub seed: u64,
    pub series: Vec<SeriesData>,
}

impl ChartGroundTruth {
    /// The shared x grid of all series.
    pub fn gold_xs(&self) -> Vec<f64> {
        self.series.first().map(|s| s.xs()).unwrap_or_default()
    }

    /// Data-range of y values across every series.
    pub fn y_data_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for s in &self.series {
            for &(_, y) in &s.points {
                lo = lo.min(y);
                hi = hi.max(y);
            }
        }
        (lo, hi)
    }

    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::InvalidData("chart id must be non-empty".into()));
        }
        if self.series.is_empty() || self.series.len() > 5 {
            return Err(Error::InvalidData(format!(
                "chart {:?}: series count {} outside 1..=5",
                self.id,
                self.series.len()
            )));
        }
        for s in &self.series {
            s.validate()?;
        }
        let xs = self.series[0].xs();
        for s in &self.series[1..] {
            if s.xs() != xs {
                return Err(Error::InvalidData(format!(
                    "chart {:?}: series {:?} has a different x grid",
                    self.id, s.name
                )));
            }
        }
        self.x_axis.validate()?;
        self.y_axis.validate()?;
        self.style.validate()
    }
}

/// Dataset shape: how many charts, how many points per series, and which
/// style variants must all be covered.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetConfig {
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default = "default_n_points")]
    pub n_points: usize,
    #[serde(default = "default_styles")]
    pub styles: Vec<StyleVariant>,
}

fn default_count() -> usize {
    23
}

fn default_n_points() -> usize {
    100
}

fn default_styles() -> Vec<StyleVariant> {
    StyleVariant::ALL.to_vec()
}

impl Default for DatasetConfig {
    fn default() -> Self {
        Self { count: default_count(), n_points: default_n_points(), styles: default_styles() }
    }
}

/// A full gold standard as persisted to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldDataset {
    pub dataset_version: String,
    pub seed: u64,
    pub charts: Vec<ChartGroundTruth>,
}

const SIZES: [(u32, u32); 5] = [(800, 600), (1000, 700), (1200, 800), (960, 640), (640, 480)];

const X_RANGES: [(f64, f64); 4] = [(0.0, 10.0), (0.0, 100.0), (0.0, 50.0), (0.0, 1.0)];

const X_LABELS: [(&str, Option<&str>); 5] = [
    ("Time", Some("s")),
    ("Time", Some("ms")),
    ("Epoch", None),
    ("Iteration", None),
    ("Distance", Some("m")),
];

const Y_LABELS: [(&str, Option<&str>); 5] = [
    ("Value", None),
    ("Amplitude", Some("mV")),
    ("Throughput", Some("req/s")),
    ("Temperature", Some("C")),
    ("Load", Some("%")),
];

const TITLE_HEADS: [&str; 8] =
    ["Volatile", "Smooth", "Seasonal", "Noisy", "Aggregate", "Filtered", "Raw", "Projected"];
const TITLE_MIDS: [&str; 6] = ["Signal", "Sensor", "Throughput", "Response", "Load", "Drift"];
const TITLE_TAILS: [&str; 4] = ["Chart", "Trace", "Profile", "Benchmark"];

const NAME_POOLS: [[&str; 3]; 5] = [
    ["Alpha", "Beta", "Gamma"],
    ["North", "South", "East"],
    ["Sensor A", "Sensor B", "Sensor C"],
    ["Run 1", "Run 2", "Run 3"],
    ["Control", "Treatment", "Combined"],
];

/// Builds the synthetic benchmark: `config.count` charts, deterministic per
/// seed, with every configured style variant appearing at least once.
pub fn build_dataset(config: &DatasetConfig, seed: u64) -> Result<Vec<ChartGroundTruth>> {
    if config.styles.is_empty() {
        return Err(Error::Config("dataset.styles: must name at least one variant".into()));
    }
    if config.count < 4 {
        return Err(Error::Config(format!(
            "dataset.count: must be at least 4, got {}",
            config.count
        )));
    }
    if config.count < config.styles.len() {
        return Err(Error::Config(format!(
            "dataset.count: {} is below the {} mandatory style variants",
            config.count,
            config.styles.len()
        )));
    }
    if config.n_points < 2 {
        return Err(Error::Config(format!(
            "dataset.n_points: must be at least 2, got {}",
            config.n_points
        )));
    }

    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut charts = Vec::with_capacity(config.count);
    for i in 0..config.count {
        let chart_seed = master.next_u64();
        let variant = config.styles[i % config.styles.len()];
        charts.push(build_chart(i, chart_seed, variant, config.n_points)?);
    }
    Ok(charts)
}

fn build_chart(
    index: usize,
    chart_seed: u64,
    variant: StyleVariant,
    n_points: usize,
) -> Result<ChartGroundTruth> {
    let mut rng = ChaCha8Rng::seed_from_u64(chart_seed);

    let &(width, height) = SIZES.choose(&mut rng).expect("non-empty");
    let &x_range = X_RANGES.choose(&mut rng).expect("non-empty");
    let &(x_label, x_unit) = X_LABELS.choose(&mut rng).expect("non-empty");
    let &(y_label, y_unit) = Y_LABELS.choose(&mut rng).expect("non-empty");
    let title = format!(
        "{} {} {}",
        TITLE_HEADS.choose(&mut rng).expect("non-empty"),
        TITLE_MIDS.choose(&mut rng).expect("non-empty"),
        TITLE_TAILS.choose(&mut rng).expect("non-empty"),
    );
    let names = NAME_POOLS.choose(&mut rng).expect("non-empty");

    let n_series = rng.random_range(1..=3usize);
    let mut series = Vec::with_capacity(n_series);
    for s in 0..n_series {
        let family = random_family(&mut rng);
        let spec = SignalSpec { name: names[s].to_string(), family, x_range };
        let series_seed = rng.next_u64();
        series.push(generate_series(&spec, n_points, series_seed)?);
    }

    let (y_lo, y_hi) = y_bounds(&series);
    let (y_min, y_max) = pad_range(y_lo, y_hi);
    let (x_min, x_max) = pad_range(x_range.0, x_range.1);

    let gt = ChartGroundTruth {
        id: format!("chart-{index:02}"),
        title,
        x_axis: AxisInfo {
            label: x_label.to_string(),
            unit: x_unit.map(str::to_string),
            min: x_min,
            max: x_max,
        },
        y_axis: AxisInfo {
            label: y_label.to_string(),
            unit: y_unit.map(str::to_string),
            min: y_min,
            max: y_max,
        },
        style: variant.to_style(width, height),
        seed: chart_seed,
        series,
    };
    gt.validate()?;
    Ok(gt)
}

fn random_family(rng: &mut ChaCha8Rng) -> SignalFamily {
    match rng.random_range(0..4u8) {
        0 => SignalFamily::Sine {
            amplitude: rng.random_range(5.0..40.0),
            frequency: rng.random_range(0.5..3.0),
            phase: rng.random_range(0.0..std::f64::consts::TAU),
            offset: rng.random_range(-10.0..60.0),
        },
        1 => SignalFamily::RandomWalk {
            start: rng.random_range(0.0..100.0),
            step_sigma: rng.random_range(0.5..4.0),
        },
        2 => SignalFamily::Volatile {
            start: rng.random_range(0.0..100.0),
            step_sigma: rng.random_range(0.5..3.0),
            impulse_prob: rng.random_range(0.03..0.12),
            impulse_scale: rng.random_range(5.0..20.0),
        },
        _ => {
            let degree = rng.random_range(2..=3usize);
            let coeffs = (0..=degree).map(|_| rng.random_range(-40.0..40.0)).collect();
            SignalFamily::Polynomial { coeffs }
        }
    }
}

fn y_bounds(series: &[SeriesData]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in series {
        for &(_, y) in &s.points {
            lo = lo.min(y);
            hi = hi.max(y);
        }
    }
    (lo, hi)
}

/// Expands a data range by 5% on each side; degenerate ranges get a unit pad.
fn pad_range(lo: f64, hi: f64) -> (f64, f64) {
    let span = hi - lo;
    let pad = if span > 0.0 { span * 0.05 } else { lo.abs().max(1.0) * 0.05 + 0.5 };
    (lo - pad, hi + pad)
}

/// True when every §-mandated style variant appears in `charts`.
pub fn style_coverage(charts: &[ChartGroundTruth]) -> bool {
    StyleVariant::ALL.iter().all(|v| {
        charts.iter().any(|c| StyleVariant::classify(&c.style) == *v)
    })
}

/// Writes a gold standard as pretty-printed JSON.
pub fn save_gold(path: &Path, gold: &GoldDataset) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(gold)
        .map_err(|e| Error::InvalidData(format!("gold serialize: {e}")))?;
    bytes.push(b'\n');
    std::fs::write(path, bytes)?;
    Ok(())
}

/// Reads and validates a gold standard. Parse failures keep the file position;
/// structural violations (non-monotonic x, bad ranges) are invalid-data errors.
pub fn load_gold(path: &Path) -> Result<GoldDataset> {
    let text = std::fs::read_to_string(path)?;
    let gold: GoldDataset = serde_json::from_str(&text)
        .map_err(|e| Error::ParseFile { path: path.to_path_buf(), message: e.to_string() })?;
    let mut seen = std::collections::HashSet::new();
    for chart in &gold.charts {
        chart.validate()?;
        if !seen.insert(chart.id.as_str()) {
            return Err(Error::InvalidData(format!("duplicate chart id {:?}", chart.id)));
        }
    }
    Ok(gold)
}
