//! # chartgrid
//!
//! A benchmark harness for measuring how well multimodal models extract data
//! from line charts, and how much a grid-overlay spatial-priming preprocessor
//! helps. It generates synthetic charts with an exact gold standard, overlays
//! semi-transparent coordinate grids, runs pluggable extractor backends (a
//! live HTTP model endpoint or a deterministic mock), scores extractions with
//! linear interpolation + SMAPE, and tests baseline-vs-grid differences with
//! the Wilcoxon signed-rank test.
//!
//! The best way in is the runnable examples, one per capability:
//!
//! ```bash
//! cargo run --example generate_dataset     # synthetic charts + gold standard
//! cargo run --example grid_overlay         # the spatial-priming preprocessor
//! cargo run --example grid_density_sweep   # 25x25 vs 50x50 vs 100x100 grids
//! cargo run --example mock_extraction      # deterministic noisy extractor
//! cargo run --example score_extraction     # interpolation + SMAPE scoring
//! cargo run --example wilcoxon_significance # exact signed-rank p-values
//! cargo run --example full_experiment      # end-to-end two-arm comparison
//! cargo run --example remote_extraction    # live multimodal endpoint setup
//! ```
//!
//! A thin `chartgrid` binary drives the same pipeline from a JSON config:
//!
//! ```bash
//! cargo run --bin chartgrid -- run --config experiment.json
//! cargo run --bin chartgrid -- sweep --config experiment.json --densities 25,50,100
//! ```
//!
//! ## Module map
//!
//! - [`dataset`] — synthetic line charts: seeded signal generators, styled
//!   rasterization with an exact data-to-pixel transform, gold-standard JSON.
//! - [`overlay`] — the grid-overlay preprocessor (bit-exact alpha blending).
//! - [`extract`] — prompt strategies, tolerant response parsing, mock and
//!   remote backends, content-addressed record cache.
//! - [`eval`] — series matching, linear interpolation onto the gold x grid,
//!   SMAPE scoring with a 200% failure ceiling.
//! - [`stats`] — descriptive stats, Tukey box plots, exact Wilcoxon
//!   signed-rank test.
//! - [`report`] — comparison table, box-plot data, and qualitative curve
//!   overlays as markdown/CSV/JSON.
//! - [`config`] / [`runner`] — declarative experiment config and the
//!   generate → overlay → extract → evaluate → report pipeline.

pub mod config;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod extract;
pub mod font;
pub mod overlay;
pub mod raster;
pub mod report;
pub mod runner;
pub mod stats;

pub use config::{ArmConfig, BackendConfig, DatasetSection, ExperimentConfig};
pub use dataset::{
    build_dataset, generate_series, load_gold, render_chart, save_gold, AxisInfo,
    ChartGroundTruth, ChartStyle, ColorMode, DatasetConfig, GoldDataset, LegendPlacement,
    PlotGeometry, SeriesData, SignalFamily, SignalSpec, StyleVariant, MAX_IMAGE_DIM,
};
pub use error::{Error, Result};
pub use eval::{
    interpolate_to_grid, match_series, score_chart, smape, MatchMethod, SeriesMatch, SmapeScore,
    SMAPE_MAX,
};
pub use extract::{
    build_prompt, cache_key, mock_extract, parse_extraction, prompt_sha256, Cache,
    ExtractedSeries, ExtractionRecord, ExtractionRequest, ExtractionResult, ExtractorBackend,
    MockBackend, NoiseModel, PromptKind, PromptStrategy, RemoteBackend, RemoteConfig,
};
pub use overlay::{apply_grid, grid_line_positions, sweep_grids, GridConfig};
pub use raster::{RasterImage, Rgb};
pub use report::{
    build_report, export_table, ComparisonReport, MethodSummary, PairwiseTest, TableFormat,
};
pub use runner::{
    cmd_evaluate, cmd_extract, cmd_generate, cmd_overlay, cmd_report, cmd_run, cmd_sweep, RunPaths,
};
pub use stats::{
    boxplot_stats, descriptive, wilcoxon_signed_rank, wilcoxon_signed_rank_method, BoxplotStats,
    PValueMode, WilcoxonMethod, WilcoxonResult,
};
