//! Experiment orchestration: generate -> overlay -> extract -> evaluate ->
//! report, each stage idempotent given a warmed cache, plus the grid-density
//! sweep. No stage mutates the gold standard after generation, and no output
//! embeds wall-clock time, so identical configs reproduce byte-identical runs.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use crate::config::{ArmConfig, BackendConfig, ExperimentConfig};
use crate::dataset::{build_dataset, load_gold, render_chart, save_gold, GoldDataset,
    GOLD_SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::eval::{score_chart, scores_from_jsonl, scores_to_jsonl, SmapeScore};
use crate::extract::{
    build_prompt, run_extraction, Cache, ExtractionRecord, ExtractionRequest, ExtractorBackend,
    MockBackend, RemoteBackend,
};
use crate::overlay::apply_grid;
use crate::raster::RasterImage;
use crate::report::{
    build_report, export_boxplot_csv, export_qualitative, export_scores_csv, export_table,
    ComparisonReport, TableFormat,
};

/// Well-known file layout of one run directory.
pub struct RunPaths {
    root: PathBuf,
}

impl RunPaths {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn gold(&self) -> PathBuf {
        self.root.join("gold.json")
    }

    pub fn charts_dir(&self) -> PathBuf {
        self.root.join("charts")
    }

    pub fn chart_png(&self, chart_id: &str) -> PathBuf {
        self.charts_dir().join(format!("{chart_id}.png"))
    }

    pub fn overlaid_dir(&self, arm: &str) -> PathBuf {
        self.root.join("overlaid").join(arm)
    }

    /// The image an arm's extractor actually sees.
    pub fn arm_image(&self, arm: &ArmConfig, chart_id: &str) -> PathBuf {
        if arm.use_grid {
            self.overlaid_dir(&arm.name).join(format!("{chart_id}.png"))
        } else {
            self.chart_png(chart_id)
        }
    }

    pub fn records_dir(&self, arm: &str) -> PathBuf {
        self.root.join("extractions").join(arm)
    }

    pub fn record(&self, arm: &str, chart_id: &str) -> PathBuf {
        self.records_dir(arm).join(format!("{chart_id}.json"))
    }

    pub fn failures(&self) -> PathBuf {
        self.root.join("failures.txt")
    }

    pub fn scores_jsonl(&self) -> PathBuf {
        self.root.join("scores.jsonl")
    }

    pub fn report_md(&self) -> PathBuf {
        self.root.join("report.md")
    }

    pub fn report_json(&self) -> PathBuf {
        self.root.join("report.json")
    }

    pub fn scores_csv(&self) -> PathBuf {
        self.root.join("scores.csv")
    }

    pub fn boxplot_csv(&self) -> PathBuf {
        self.root.join("boxplot.csv")
    }

    pub fn qualitative_dir(&self) -> PathBuf {
        self.root.join("qualitative")
    }
}

/// Generates the dataset: gold standard JSON plus one PNG per chart.
pub fn cmd_generate(config: &ExperimentConfig) -> Result<GoldDataset> {
    config.validate()?;
    let paths = RunPaths::new(&config.output_dir);
    let charts = build_dataset(&config.dataset.shape, config.dataset.seed)?;
    let gold = GoldDataset {
        dataset_version: GOLD_SCHEMA_VERSION.into(),
        seed: config.dataset.seed,
        charts,
    };

    std::fs::create_dir_all(paths.charts_dir())?;
    save_gold(&paths.gold(), &gold)?;
    for gt in &gold.charts {
        let (image, _) = render_chart(gt)?;
        image.save_png(&paths.chart_png(&gt.id))?;
    }
    println!(
        "generated {} charts -> {} (+ gold.json)",
        gold.charts.len(),
        paths.charts_dir().display()
    );
    Ok(gold)
}

/// Applies the grid overlay for every arm that uses it. Returns the number of
/// images written.
pub fn cmd_overlay(config: &ExperimentConfig) -> Result<usize> {
    config.validate()?;
    let paths = RunPaths::new(&config.output_dir);
    let gold = load_gold_or_hint(&paths)?;

    let mut written = 0;
    for arm in config.arms.iter().filter(|a| a.use_grid) {
        let dir = paths.overlaid_dir(&arm.name);
        std::fs::create_dir_all(&dir)?;
        for gt in &gold.charts {
            let base = RasterImage::load_png(&paths.chart_png(&gt.id))?;
            let overlaid = apply_grid(&base, &config.grid)?;
            overlaid.save_png(&dir.join(format!("{}.png", gt.id)))?;
            written += 1;
        }
        println!(
            "overlaid {} charts at {}x{} -> {}",
            gold.charts.len(),
            config.grid.cells_per_axis,
            config.grid.cells_per_axis,
            dir.display()
        );
    }
    Ok(written)
}

/// Runs extraction for every (arm, chart) pair through the cache, up to
/// `max_in_flight` requests in parallel. Transient failures degrade into
/// records and are listed in `failures.txt`; fatal configuration errors abort
/// before any network call.
pub fn cmd_extract(config: &ExperimentConfig) -> Result<Vec<ExtractionRecord>> {
    config.validate()?;
    let paths = RunPaths::new(&config.output_dir);
    let gold = load_gold_or_hint(&paths)?;
    let cache = Cache::new(&config.cache_dir)?;

    let backends: Vec<Box<dyn ExtractorBackend>> = config
        .arms
        .iter()
        .map(|arm| make_backend(config, arm, &gold))
        .collect::<Result<_>>()?;
    let prompts: Vec<String> =
        config.arms.iter().map(|arm| build_prompt(&config.prompt_strategy(arm))).collect();

    for arm in &config.arms {
        std::fs::create_dir_all(paths.records_dir(&arm.name))?;
    }

    let n_charts = gold.charts.len();
    let jobs: VecDeque<usize> = (0..config.arms.len() * n_charts).collect();
    let queue = Mutex::new(jobs);
    let results: Vec<Mutex<Option<ExtractionRecord>>> =
        (0..config.arms.len() * n_charts).map(|_| Mutex::new(None)).collect();
    let fatal: Mutex<Option<Error>> = Mutex::new(None);

    let workers = config.max_in_flight.min(config.arms.len() * n_charts).max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                if fatal.lock().expect("fatal lock").is_some() {
                    break;
                }
                let Some(job) = queue.lock().expect("queue lock").pop_front() else { break };
                let arm = &config.arms[job / n_charts];
                let gt = &gold.charts[job % n_charts];
                let outcome = (|| -> Result<ExtractionRecord> {
                    let image_png = std::fs::read(paths.arm_image(arm, &gt.id))?;
                    let request = ExtractionRequest {
                        chart_id: &gt.id,
                        prompt: &prompts[job / n_charts],
                        image_png: &image_png,
                    };
                    run_extraction(backends[job / n_charts].as_ref(), Some(&cache), &arm.name, &request)
                })();
                match outcome {
                    Ok(record) => {
                        let status = match &record.parse_error {
                            None => "ok".to_string(),
                            Some(e) => format!("failed: {e}"),
                        };
                        println!("[{}] {}: {}", arm.name, gt.id, status);
                        *results[job].lock().expect("result lock") = Some(record);
                    }
                    Err(e) => {
                        *fatal.lock().expect("fatal lock") = Some(e);
                        break;
                    }
                }
            });
        }
    });

    if let Some(e) = fatal.into_inner().expect("fatal lock") {
        return Err(e);
    }

    let records: Vec<ExtractionRecord> = results
        .into_iter()
        .map(|slot| slot.into_inner().expect("result lock").expect("all jobs completed"))
        .collect();

    let mut failures = String::new();
    for record in &records {
        std::fs::write(
            paths.record(&record.method, &record.chart_id),
            serde_json::to_vec_pretty(record).expect("record serializes"),
        )?;
        if let Some(e) = &record.parse_error {
            let _ = writeln!(failures, "{}\t{}\t{}", record.method, record.chart_id, e);
        }
    }
    std::fs::write(paths.failures(), failures)?;
    Ok(records)
}

/// Scores every extraction record against gold and writes `scores.jsonl`.
pub fn cmd_evaluate(config: &ExperimentConfig) -> Result<Vec<SmapeScore>> {
    config.validate()?;
    let paths = RunPaths::new(&config.output_dir);
    let gold = load_gold_or_hint(&paths)?;

    let mut scores = Vec::with_capacity(config.arms.len() * gold.charts.len());
    for arm in &config.arms {
        for gt in &gold.charts {
            let record = read_record(&paths, &arm.name, &gt.id)?;
            scores.push(score_chart(gt, record.parsed.as_ref(), &arm.name));
        }
    }
    std::fs::write(paths.scores_jsonl(), scores_to_jsonl(&scores))?;
    println!("scored {} (chart, arm) pairs -> {}", scores.len(), paths.scores_jsonl().display());
    Ok(scores)
}

/// Builds the comparison report and writes every export: `report.md`,
/// `report.json`, `scores.csv`, `boxplot.csv`, and `qualitative/<chart>.csv`.
pub fn cmd_report(config: &ExperimentConfig) -> Result<ComparisonReport> {
    config.validate()?;
    let paths = RunPaths::new(&config.output_dir);
    let gold = load_gold_or_hint(&paths)?;
    let text = std::fs::read_to_string(paths.scores_jsonl()).map_err(|e| {
        Error::Report(format!(
            "cannot read {} ({e}); run `evaluate` first",
            paths.scores_jsonl().display()
        ))
    })?;
    let scores = scores_from_jsonl(&text)?;

    let mut pairs = Vec::new();
    for i in 0..config.arms.len() {
        for j in i + 1..config.arms.len() {
            pairs.push((config.arms[i].name.clone(), config.arms[j].name.clone()));
        }
    }
    let report = build_report(&scores, &pairs, &config.fingerprint())?;

    let mut md = export_table(&report, TableFormat::Markdown)?;
    md.push_str(&format!("\nFingerprint: {}\n", report.config_fingerprint));
    std::fs::write(paths.report_md(), md)?;
    std::fs::write(paths.report_json(), export_table(&report, TableFormat::Json)?)?;
    std::fs::write(paths.scores_csv(), export_scores_csv(&scores))?;
    std::fs::write(paths.boxplot_csv(), export_boxplot_csv(&report))?;

    std::fs::create_dir_all(paths.qualitative_dir())?;
    for gt in &gold.charts {
        let extractions: Vec<(String, Option<crate::extract::ExtractionResult>)> = config
            .arms
            .iter()
            .map(|arm| {
                let record = read_record(&paths, &arm.name, &gt.id)?;
                Ok((arm.name.clone(), record.parsed))
            })
            .collect::<Result<_>>()?;
        std::fs::write(
            paths.qualitative_dir().join(format!("{}.csv", gt.id)),
            export_qualitative(gt, &extractions),
        )?;
    }
    println!("report -> {}", paths.report_md().display());
    Ok(report)
}

/// The full protocol in sequence.
pub fn cmd_run(config: &ExperimentConfig) -> Result<ComparisonReport> {
    cmd_generate(config)?;
    cmd_overlay(config)?;
    cmd_extract(config)?;
    cmd_evaluate(config)?;
    cmd_report(config)
}

/// One full run per grid density, each in its own `sweep-<d>` directory.
/// The extraction cache is shared, so arms whose inputs do not change (for
/// example a gridless baseline) are not re-queried.
pub fn cmd_sweep(config: &ExperimentConfig, densities: &[u32]) -> Result<Vec<PathBuf>> {
    if densities.is_empty() {
        return Err(Error::Config("densities: must name at least one grid density".into()));
    }
    let mut report_dirs = Vec::with_capacity(densities.len());
    for &density in densities {
        let mut sub = config.clone();
        sub.grid = config.grid.with_cells(density);
        sub.output_dir = config.output_dir.join(format!("sweep-{density}"));
        println!("--- sweep density {density}x{density} ---");
        cmd_run(&sub)?;
        report_dirs.push(sub.output_dir);
    }
    Ok(report_dirs)
}

fn load_gold_or_hint(paths: &RunPaths) -> Result<GoldDataset> {
    if !paths.gold().exists() {
        return Err(Error::Config(format!(
            "no gold standard at {}; run `generate` first",
            paths.gold().display()
        )));
    }
    load_gold(&paths.gold())
}

fn read_record(paths: &RunPaths, arm: &str, chart_id: &str) -> Result<ExtractionRecord> {
    let path = paths.record(arm, chart_id);
    let text = std::fs::read_to_string(&path).map_err(|e| {
        Error::Evaluation(format!("cannot read {} ({e}); run `extract` first", path.display()))
    })?;
    let record: ExtractionRecord = serde_json::from_str(&text)
        .map_err(|e| Error::ParseFile { path, message: e.to_string() })?;
    record.validate()?;
    Ok(record)
}

fn make_backend(
    config: &ExperimentConfig,
    arm: &ArmConfig,
    gold: &GoldDataset,
) -> Result<Box<dyn ExtractorBackend>> {
    match &config.backend {
        BackendConfig::Mock => {
            let noise = arm.mock_noise.clone().ok_or_else(|| {
                Error::Config(format!("arm {:?}: mock backend needs mock_noise", arm.name))
            })?;
            Ok(Box::new(MockBackend::new(&gold.charts, noise)?))
        }
        BackendConfig::Remote(remote) => Ok(Box::new(RemoteBackend::new(remote.clone())?)),
    }
}
