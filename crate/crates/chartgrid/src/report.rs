//! Report assembly and export: the method comparison table, box-plot data,
//! per-chart score breakdowns, and qualitative curve overlays as plain-text
//! artifacts (markdown / CSV / JSON) ready for external plotting.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::ChartGroundTruth;
use crate::error::{Error, Result};
use crate::eval::{interpolate_to_grid, match_series, SmapeScore};
use crate::extract::ExtractionResult;
use crate::stats::{boxplot_stats, descriptive, wilcoxon_signed_rank, BoxplotStats, WilcoxonResult};

/// Aggregates for one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub name: String,
    pub mean_smape: f64,
    pub std_dev: f64,
    pub boxplot: BoxplotStats,
}

/// Scores of one chart across every method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartScores {
    pub chart_id: String,
    pub scores: BTreeMap<String, f64>,
}

/// Signed-rank comparison of one method pair. `wilcoxon` is absent when the
/// test is undefined (for example, all paired differences are zero); the note
/// says why.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseTest {
    pub method_a: String,
    pub method_b: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wilcoxon: Option<WilcoxonResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// The full comparison: per-method aggregates, the per-chart score matrix,
/// pairwise significance tests, and the provenance fingerprint of the inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub methods: Vec<MethodSummary>,
    pub per_chart: Vec<ChartScores>,
    pub wilcoxon: Vec<PairwiseTest>,
    pub config_fingerprint: String,
}

/// Builds a report from a complete chart x method score matrix. Method and
/// chart order follow first appearance in `scores`. Any missing or duplicate
/// cell fails with a message listing the gaps.
pub fn build_report(
    scores: &[SmapeScore],
    pairs: &[(String, String)],
    config_fingerprint: &str,
) -> Result<ComparisonReport> {
    if scores.is_empty() {
        return Err(Error::Report("no scores to report".into()));
    }

    let mut method_order: Vec<String> = Vec::new();
    let mut chart_order: Vec<String> = Vec::new();
    let mut matrix: BTreeMap<(String, String), f64> = BTreeMap::new();
    for s in scores {
        if !method_order.contains(&s.method) {
            method_order.push(s.method.clone());
        }
        if !chart_order.contains(&s.chart_id) {
            chart_order.push(s.chart_id.clone());
        }
        if matrix.insert((s.chart_id.clone(), s.method.clone()), s.smape).is_some() {
            return Err(Error::Report(format!(
                "duplicate score for chart {:?} method {:?}",
                s.chart_id, s.method
            )));
        }
    }

    let mut gaps = Vec::new();
    for chart in &chart_order {
        for method in &method_order {
            if !matrix.contains_key(&(chart.clone(), method.clone())) {
                gaps.push(format!("({chart}, {method})"));
            }
        }
    }
    if !gaps.is_empty() {
        return Err(Error::Report(format!(
            "missing {} score cell(s): {}",
            gaps.len(),
            gaps.join(", ")
        )));
    }

    let mut methods = Vec::with_capacity(method_order.len());
    for method in &method_order {
        let values: Vec<f64> =
            chart_order.iter().map(|c| matrix[&(c.clone(), method.clone())]).collect();
        let (mean_smape, std_dev) = descriptive(&values)
            .map_err(|e| Error::Report(format!("method {method:?}: {e}")))?;
        let boxplot = boxplot_stats(&values)
            .map_err(|e| Error::Report(format!("method {method:?}: {e}")))?;
        methods.push(MethodSummary { name: method.clone(), mean_smape, std_dev, boxplot });
    }

    let per_chart = chart_order
        .iter()
        .map(|chart| ChartScores {
            chart_id: chart.clone(),
            scores: method_order
                .iter()
                .map(|m| (m.clone(), matrix[&(chart.clone(), m.clone())]))
                .collect(),
        })
        .collect();

    let mut wilcoxon = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        for name in [a, b] {
            if !method_order.contains(name) {
                return Err(Error::Report(format!("wilcoxon pair names unknown method {name:?}")));
            }
        }
        let va: Vec<f64> = chart_order.iter().map(|c| matrix[&(c.clone(), a.clone())]).collect();
        let vb: Vec<f64> = chart_order.iter().map(|c| matrix[&(c.clone(), b.clone())]).collect();
        let entry = match wilcoxon_signed_rank(&va, &vb) {
            Ok(result) => PairwiseTest {
                method_a: a.clone(),
                method_b: b.clone(),
                wilcoxon: Some(result),
                note: None,
            },
            Err(Error::InsufficientData(msg)) => PairwiseTest {
                method_a: a.clone(),
                method_b: b.clone(),
                wilcoxon: None,
                note: Some(msg),
            },
            Err(e) => return Err(e),
        };
        wilcoxon.push(entry);
    }

    Ok(ComparisonReport {
        methods,
        per_chart,
        wilcoxon,
        config_fingerprint: config_fingerprint.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Markdown,
    Csv,
    Json,
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_lowercase().as_str() {
            "markdown" | "md" => Ok(TableFormat::Markdown),
            "csv" => Ok(TableFormat::Csv),
            "json" => Ok(TableFormat::Json),
            other => Err(Error::Config(format!(
                "format: unknown {other:?} (expected markdown, csv, or json)"
            ))),
        }
    }
}

/// Renders the comparison table: `Method | Mean SMAPE, % | Std. Dev., %` at
/// two decimals, plus a significance line per tested pair (markdown), the
/// same rows as CSV, or the whole report as round-trippable JSON.
pub fn export_table(report: &ComparisonReport, format: TableFormat) -> Result<String> {
    match format {
        TableFormat::Markdown => Ok(markdown_table(report)),
        TableFormat::Csv => {
            let mut out = String::from("method,mean_smape_pct,std_dev_pct\n");
            for m in &report.methods {
                let _ = writeln!(
                    out,
                    "{},{:.2},{:.2}",
                    csv_field(&m.name),
                    m.mean_smape,
                    m.std_dev
                );
            }
            Ok(out)
        }
        TableFormat::Json => {
            let mut text = serde_json::to_string_pretty(report)
                .map_err(|e| Error::Report(format!("report serialize: {e}")))?;
            text.push('\n');
            Ok(text)
        }
    }
}

fn markdown_table(report: &ComparisonReport) -> String {
    let mut out = String::new();
    out.push_str("| Method | Mean SMAPE, % | Std. Dev., % |\n");
    out.push_str("| --- | --- | --- |\n");
    for m in &report.methods {
        let _ = writeln!(out, "| {} | {:.2} | {:.2} |", m.name, m.mean_smape, m.std_dev);
    }
    for pair in &report.wilcoxon {
        out.push('\n');
        let label = if report.wilcoxon.len() == 1 {
            "p".to_string()
        } else {
            format!("p ({} vs {})", pair.method_a, pair.method_b)
        };
        match (&pair.wilcoxon, &pair.note) {
            (Some(w), _) => {
                let _ = writeln!(out, "{label} = {}", format_p(w.p_value));
            }
            (None, Some(note)) => {
                let _ = writeln!(out, "{label} = n/a ({note})");
            }
            (None, None) => {
                let _ = writeln!(out, "{label} = n/a");
            }
        }
    }
    out
}

/// Two decimals down to 0.01, scientific notation below that.
fn format_p(p: f64) -> String {
    if p >= 0.01 {
        format!("{p:.2}")
    } else {
        format!("{p:.2e}")
    }
}

/// `x, gold_y, <method>_y...` for the first gold series of a chart, every
/// method's curve interpolated onto the gold x grid: the data behind a
/// qualitative overlay plot. Methods that failed emit empty cells.
pub fn export_qualitative(
    gt: &ChartGroundTruth,
    extractions: &[(String, Option<ExtractionResult>)],
) -> String {
    let gold = &gt.series[0];
    let xs = gold.xs();
    let gold_names: Vec<String> = gt.series.iter().map(|s| s.name.clone()).collect();

    let columns: Vec<Option<Vec<f64>>> = extractions
        .iter()
        .map(|(_, extraction)| {
            let extraction = extraction.as_ref()?;
            let matching = match_series(&gold_names, extraction);
            let e = matching.assignments.first().and_then(|&(_, e)| e)?;
            interpolate_to_grid(&extraction.series[e].points, &xs).ok()
        })
        .collect();

    let mut out = String::from("x,gold_y");
    for (name, _) in extractions {
        let _ = write!(out, ",{}", csv_field(&format!("{name}_y")));
    }
    out.push('\n');
    for (i, &x) in xs.iter().enumerate() {
        let _ = write!(out, "{x},{}", gold.points[i].1);
        for column in &columns {
            match column {
                Some(ys) => {
                    let _ = write!(out, ",{}", ys[i]);
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

/// Long-format scores table: one row per (chart, method).
pub fn export_scores_csv(scores: &[SmapeScore]) -> String {
    let mut out = String::from("chart_id,method,smape,n_points\n");
    for s in scores {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            csv_field(&s.chart_id),
            csv_field(&s.method),
            s.smape,
            s.n_points
        );
    }
    out
}

/// Box-plot data per method, for rendering the score-distribution figure.
pub fn export_boxplot_csv(report: &ComparisonReport) -> String {
    let mut out =
        String::from("method,median,q1,q3,whisker_low,whisker_high,outliers\n");
    for m in &report.methods {
        let outliers =
            m.boxplot.outliers.iter().map(f64::to_string).collect::<Vec<_>>().join(";");
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            csv_field(&m.name),
            m.boxplot.median,
            m.boxplot.q1,
            m.boxplot.q3,
            m.boxplot.whisker_low,
            m.boxplot.whisker_high,
            csv_field(&outliers)
        );
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
