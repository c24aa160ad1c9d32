//! Scoring: match extracted series to gold series, resample the sparse
//! extraction onto the gold x grid by linear interpolation, and compute SMAPE.
//!
//! SMAPE is bounded in [0, 200] percent; every failure mode (missed series,
//! failed parse) degrades to the 200 ceiling instead of dropping the chart,
//! which keeps the paired statistical design intact.

use serde::{Deserialize, Serialize};

use crate::dataset::ChartGroundTruth;
use crate::error::{Error, Result};
use crate::extract::ExtractionResult;

/// Maximum SMAPE, scored by unmatched gold series and failed parses.
pub const SMAPE_MAX: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchMethod {
    /// Every pairing came from a (normalized) name match.
    ByName,
    /// At least one pairing fell back to listed order.
    ByOrder,
}

/// Pairing of gold series to extracted series. Every gold index appears
/// exactly once on the left; extracted indexes are used at most once.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesMatch {
    pub assignments: Vec<(usize, Option<usize>)>,
    pub method: MatchMethod,
}

/// Matches extracted series to gold series: pass 1 is a case-insensitive,
/// whitespace-trimmed exact name match; pass 2 pairs the remainder in listed
/// order. Gold series left over map to `None`; extra extracted series are
/// ignored.
pub fn match_series(gold_names: &[String], extracted: &ExtractionResult) -> SeriesMatch {
    let normalize = |s: &str| s.trim().to_lowercase();
    let extracted_names: Vec<String> =
        extracted.series.iter().map(|s| normalize(&s.name)).collect();

    let mut assignments: Vec<(usize, Option<usize>)> = Vec::with_capacity(gold_names.len());
    let mut used = vec![false; extracted_names.len()];

    for (g, gold_name) in gold_names.iter().enumerate() {
        let key = normalize(gold_name);
        let hit = extracted_names.iter().enumerate().find(|(e, name)| !used[*e] && **name == key);
        match hit {
            Some((e, _)) => {
                used[e] = true;
                assignments.push((g, Some(e)));
            }
            None => assignments.push((g, None)),
        }
    }

    let mut fell_back = false;
    let mut free = (0..extracted_names.len()).filter(|&e| !used[e]);
    for slot in assignments.iter_mut() {
        if slot.1.is_none() {
            if let Some(e) = free.next() {
                slot.1 = Some(e);
                fell_back = true;
            }
        }
    }

    let method = if fell_back { MatchMethod::ByOrder } else { MatchMethod::ByName };
    SeriesMatch { assignments, method }
}

/// Resamples `points` (sorted, strictly increasing x) at `target_xs`:
/// piecewise-linear inside the covered range, endpoint-clamped outside it.
/// A query exactly at a source x returns that source y bit-for-bit.
pub fn interpolate_to_grid(points: &[(f64, f64)], target_xs: &[f64]) -> Result<Vec<f64>> {
    if points.is_empty() {
        return Err(Error::Evaluation("interpolation needs at least one point".into()));
    }
    for pair in points.windows(2) {
        if !(pair[0].0 < pair[1].0) {
            return Err(Error::Evaluation(format!(
                "interpolation input must be strictly increasing in x ({} then {})",
                pair[0].0, pair[1].0
            )));
        }
    }

    let out = target_xs
        .iter()
        .map(|&t| {
            let idx = points.partition_point(|&(x, _)| x < t);
            if idx < points.len() && points[idx].0 == t {
                points[idx].1
            } else if idx == 0 {
                points[0].1
            } else if idx == points.len() {
                points[points.len() - 1].1
            } else {
                let (x0, y0) = points[idx - 1];
                let (x1, y1) = points[idx];
                y0 + (t - x0) * (y1 - y0) / (x1 - x0)
            }
        })
        .collect();
    Ok(out)
}

/// Symmetric mean absolute percentage error in percent:
/// `(100/n) * sum |F - A| / ((|A| + |F|)/2)`, with 0/0 terms defined as 0.
/// Bounded in [0, 200] and symmetric in its arguments.
pub fn smape(actual: &[f64], forecast: &[f64]) -> Result<f64> {
    if actual.is_empty() || actual.len() != forecast.len() {
        return Err(Error::Evaluation(format!(
            "smape needs equal non-empty inputs, got {} and {}",
            actual.len(),
            forecast.len()
        )));
    }
    let sum: f64 = actual
        .iter()
        .zip(forecast)
        .map(|(&a, &f)| {
            let denom = (a.abs() + f.abs()) / 2.0;
            if denom == 0.0 {
                0.0
            } else {
                (f - a).abs() / denom
            }
        })
        .sum();
    Ok(sum * 100.0 / actual.len() as f64)
}

/// One chart-method accuracy score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmapeScore {
    pub chart_id: String,
    pub method: String,
    /// Percent in [0, 200].
    pub smape: f64,
    /// Total gold points across matched and unmatched series.
    pub n_points: usize,
    pub per_series: Vec<(String, f64)>,
}

/// Scores one extraction against gold. `None` stands for a failed parse and
/// scores the ceiling. Per gold series: matched series are interpolated onto
/// the gold x grid and SMAPE-scored; unmatched gold series cost the 200
/// ceiling. The chart score is the point-count-weighted mean across gold
/// series.
pub fn score_chart(
    gt: &ChartGroundTruth,
    extraction: Option<&ExtractionResult>,
    method: &str,
) -> SmapeScore {
    let n_points: usize = gt.series.iter().map(|s| s.points.len()).sum();

    let per_series: Vec<(String, f64)> = match extraction {
        None => gt.series.iter().map(|s| (s.name.clone(), SMAPE_MAX)).collect(),
        Some(extraction) => {
            let gold_names: Vec<String> = gt.series.iter().map(|s| s.name.clone()).collect();
            let matching = match_series(&gold_names, extraction);
            matching
                .assignments
                .iter()
                .map(|&(g, e)| {
                    let gold = &gt.series[g];
                    let value = e
                        .and_then(|e| extraction.series.get(e))
                        .and_then(|ext| series_smape(gold, &ext.points).ok())
                        .unwrap_or(SMAPE_MAX);
                    (gold.name.clone(), value)
                })
                .collect()
        }
    };

    let weighted: f64 = gt
        .series
        .iter()
        .zip(&per_series)
        .map(|(s, (_, v))| s.points.len() as f64 * v)
        .sum();
    let smape = if n_points == 0 { SMAPE_MAX } else { weighted / n_points as f64 };

    SmapeScore {
        chart_id: gt.id.clone(),
        method: method.to_string(),
        smape,
        n_points,
        per_series,
    }
}

fn series_smape(gold: &crate::dataset::SeriesData, extracted: &[(f64, f64)]) -> Result<f64> {
    let xs = gold.xs();
    let forecast = interpolate_to_grid(extracted, &xs)?;
    smape(&gold.ys(), &forecast)
}

/// Serializes scores as JSON lines, one record per (chart, method).
pub fn scores_to_jsonl(scores: &[SmapeScore]) -> String {
    let mut out = String::new();
    for s in scores {
        out.push_str(&serde_json::to_string(s).expect("score serializes"));
        out.push('\n');
    }
    out
}

/// Parses a JSON-lines score file.
pub fn scores_from_jsonl(text: &str) -> Result<Vec<SmapeScore>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, line)| {
            serde_json::from_str(line)
                .map_err(|e| Error::Evaluation(format!("scores line {}: {e}", i + 1)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::{ExtractedSeries, ExtractionResult};

    fn extraction(series: Vec<(&str, Vec<(f64, f64)>)>) -> ExtractionResult {
        ExtractionResult {
            label: None,
            x_axis_info: None,
            y_axis_info: None,
            series: series
                .into_iter()
                .map(|(name, points)| ExtractedSeries { name: name.into(), points })
                .collect(),
        }
    }

    #[test]
    fn name_match_is_normalized_and_crosswise() {
        let gold = vec!["Desert".to_string(), "Equatorial".to_string()];
        let ext = extraction(vec![
            ("equatorial ", vec![(0.0, 1.0)]),
            ("Desert", vec![(0.0, 2.0)]),
        ]);
        let m = match_series(&gold, &ext);
        assert_eq!(m.assignments, vec![(0, Some(1)), (1, Some(0))]);
        assert_eq!(m.method, MatchMethod::ByName);
    }

    #[test]
    fn order_fallback_and_leftover_gold() {
        let gold = vec!["A".to_string(), "B".to_string()];
        let ext = extraction(vec![("X", vec![(0.0, 1.0)])]);
        let m = match_series(&gold, &ext);
        assert_eq!(m.assignments, vec![(0, Some(0)), (1, None)]);
        assert_eq!(m.method, MatchMethod::ByOrder);
    }

    #[test]
    fn surplus_extracted_series_are_ignored() {
        let gold = vec!["A".to_string()];
        let ext = extraction(vec![("A", vec![(0.0, 1.0)]), ("A2", vec![(0.0, 2.0)])]);
        let m = match_series(&gold, &ext);
        assert_eq!(m.assignments, vec![(0, Some(0))]);
    }

    #[test]
    fn interpolation_midpoint_clamp_and_hand_case() {
        let pts = [(0.0, 0.0), (10.0, 10.0)];
        assert_eq!(interpolate_to_grid(&pts, &[5.0]).unwrap(), vec![5.0]);
        assert_eq!(interpolate_to_grid(&pts, &[12.0]).unwrap(), vec![10.0]);
        assert_eq!(interpolate_to_grid(&pts, &[-3.0]).unwrap(), vec![0.0]);
        let pts = [(0.0, 0.0), (4.0, 8.0), (10.0, 2.0)];
        // 8 + (7-4)/(10-4)*(2-8) = 5
        assert_eq!(interpolate_to_grid(&pts, &[7.0]).unwrap(), vec![5.0]);
    }

    #[test]
    fn interpolation_at_sources_is_bit_exact() {
        let pts = [(0.1, 0.1), (0.2, 0.3), (0.35, -0.7), (1.4, 9.9)];
        let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
        assert_eq!(interpolate_to_grid(&pts, &xs).unwrap(), ys);
    }

    #[test]
    fn single_point_is_constant_everywhere() {
        let pts = [(3.0, 7.5)];
        assert_eq!(interpolate_to_grid(&pts, &[0.0, 3.0, 99.0]).unwrap(), vec![7.5, 7.5, 7.5]);
    }

    #[test]
    fn interpolation_rejects_bad_input() {
        assert!(interpolate_to_grid(&[], &[1.0]).is_err());
        assert!(interpolate_to_grid(&[(1.0, 0.0), (1.0, 2.0)], &[1.0]).is_err());
    }

    #[test]
    fn smape_known_values() {
        assert_eq!(smape(&[100.0], &[100.0]).unwrap(), 0.0);
        let v = smape(&[100.0], &[50.0]).unwrap();
        assert!((v - 200.0 / 3.0).abs() < 1e-12, "got {v}");
        assert_eq!(smape(&[0.0], &[0.0]).unwrap(), 0.0);
        assert!(smape(&[], &[]).is_err());
        assert!(smape(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn smape_is_symmetric_and_bounded() {
        let a = [3.0, -1.0, 0.0, 7.2, 100.0];
        let f = [2.5, 1.0, 0.4, -7.2, 0.0];
        let ab = smape(&a, &f).unwrap();
        let ba = smape(&f, &a).unwrap();
        assert_eq!(ab, ba);
        assert!((0.0..=SMAPE_MAX).contains(&ab));
    }

    #[test]
    fn score_identity_ceiling_and_weighting() {
        let charts =
            crate::dataset::build_dataset(&crate::dataset::DatasetConfig::default(), 3).unwrap();
        let gt = &charts[0];

        // exact extraction scores zero
        let exact = ExtractionResult {
            label: Some(gt.title.clone()),
            x_axis_info: None,
            y_axis_info: None,
            series: gt
                .series
                .iter()
                .map(|s| ExtractedSeries { name: s.name.clone(), points: s.points.clone() })
                .collect(),
        };
        let score = score_chart(gt, Some(&exact), "m");
        assert_eq!(score.smape, 0.0);
        assert_eq!(score.n_points, gt.series.len() * 100);

        // failed parse scores the ceiling
        let failed = score_chart(gt, None, "m");
        assert_eq!(failed.smape, SMAPE_MAX);

        // weighted mean: one matched series at ~10%, one unmatched at 200%
        let two = ChartGroundTruth {
            series: vec![
                crate::dataset::SeriesData {
                    name: "A".into(),
                    points: (0..100).map(|i| (i as f64, 100.0)).collect(),
                },
                crate::dataset::SeriesData {
                    name: "B".into(),
                    points: (0..100).map(|i| (i as f64, 50.0)).collect(),
                },
            ],
            ..gt.clone()
        };
        // forecast 110.526315789...: |F-A|/((|A|+|F|)/2) = 10.526.../105.263... = 10%
        let f = 100.0 * (2.0 + 0.1) / (2.0 - 0.1);
        let ext = extraction(vec![("A", vec![(0.0, f), (99.0, f)])]);
        let score = score_chart(&two, Some(&ext), "m");
        let series_a = smape(&[100.0], &[f]).unwrap();
        let want = (100.0 * series_a + 100.0 * SMAPE_MAX) / 200.0;
        assert!((score.smape - want).abs() < 1e-9, "{} vs {want}", score.smape);
        assert_eq!(score.per_series.len(), 2);
        assert_eq!(score.per_series[1].1, SMAPE_MAX);
    }

    proptest::proptest! {
        // linear interpolation plus endpoint clamping can never leave the
        // convex hull of the input y values
        #[test]
        fn interpolation_never_overshoots(
            raw in proptest::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..20),
            queries in proptest::collection::vec(-2e3f64..2e3, 1..40),
        ) {
            let mut pts = raw;
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            pts.dedup_by(|a, b| a.0 == b.0);
            let lo = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
            let out = interpolate_to_grid(&pts, &queries).unwrap();
            for y in out {
                proptest::prop_assert!(y >= lo - 1e-9 && y <= hi + 1e-9, "{y} outside [{lo}, {hi}]");
            }
        }
    }

    #[test]
    fn jsonl_roundtrip() {
        let scores = vec![SmapeScore {
            chart_id: "chart-00".into(),
            method: "baseline".into(),
            smape: 12.5,
            n_points: 100,
            per_series: vec![("A".into(), 12.5)],
        }];
        let text = scores_to_jsonl(&scores);
        assert_eq!(scores_from_jsonl(&text).unwrap(), scores);
    }
}
