//! Deterministic mock extractor: subsamples ground truth with a configurable
//! noise model, standing in for a live model so the complete pipeline runs
//! offline and reproducibly.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dataset::{linspace, ChartGroundTruth};
use crate::error::{Error, Result};
use crate::eval::interpolate_to_grid;
use crate::extract::{ExtractedSeries, ExtractionRequest, ExtractionResult, ExtractorBackend};

/// Noise applied by the mock extractor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// How many x positions to sample, evenly over the gold x range.
    #[serde(default = "default_sample_count")]
    pub sample_count: usize,
    /// Gaussian y noise, as a fraction of the chart's y data range.
    #[serde(default)]
    pub y_sigma_frac: f64,
    /// Probability of replacing a series name with an unmatchable one.
    #[serde(default)]
    pub name_corruption_prob: f64,
    /// Probability of omitting a series entirely.
    #[serde(default)]
    pub series_drop_prob: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_sample_count() -> usize {
    20
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            sample_count: default_sample_count(),
            y_sigma_frac: 0.0,
            name_corruption_prob: 0.0,
            series_drop_prob: 0.0,
            seed: 0,
        }
    }
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        if self.sample_count < 2 {
            return Err(Error::Config(format!(
                "noise.sample_count: must be at least 2, got {}",
                self.sample_count
            )));
        }
        if self.y_sigma_frac < 0.0 {
            return Err(Error::Config(format!(
                "noise.y_sigma_frac: must be non-negative, got {}",
                self.y_sigma_frac
            )));
        }
        for (field, p) in [
            ("noise.name_corruption_prob", self.name_corruption_prob),
            ("noise.series_drop_prob", self.series_drop_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{field}: {p} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Simulates a model reading the chart: samples `sample_count` x positions
/// evenly over the gold x range, linearly interpolates the true y there, and
/// perturbs the result per the noise model. Deterministic for a fixed
/// (chart, noise): the per-chart stream is seeded from `noise.seed` and the
/// chart id.
pub fn mock_extract(gt: &ChartGroundTruth, noise: &NoiseModel) -> Result<ExtractionResult> {
    noise.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed ^ stable_id_hash(&gt.id));

    let xs = gt.gold_xs();
    if xs.is_empty() {
        return Err(Error::InvalidData(format!("chart {:?} has no series", gt.id)));
    }
    let sample_xs = linspace(xs[0], xs[xs.len() - 1], noise.sample_count);

    let (y_lo, y_hi) = gt.y_data_range();
    let sigma = noise.y_sigma_frac * (y_hi - y_lo);
    let gauss = Normal::new(0.0, 1.0).expect("unit normal");

    let mut series = Vec::new();
    for (i, gold) in gt.series.iter().enumerate() {
        if rng.random::<f64>() < noise.series_drop_prob {
            continue;
        }
        let mut ys = interpolate_to_grid(&gold.points, &sample_xs)?;
        if sigma > 0.0 {
            for y in ys.iter_mut() {
                *y += sigma * gauss.sample(&mut rng);
            }
        }
        let name = if rng.random::<f64>() < noise.name_corruption_prob {
            format!("unlabeled {}", i + 1)
        } else {
            gold.name.clone()
        };
        series.push(ExtractedSeries {
            name,
            points: sample_xs.iter().copied().zip(ys).collect(),
        });
    }

    Ok(ExtractionResult {
        label: Some(gt.title.clone()),
        x_axis_info: Some(gt.x_axis.display_label()),
        y_axis_info: Some(gt.y_axis.display_label()),
        series,
    })
}

/// First 8 bytes of SHA-256, stable across platforms and releases.
fn stable_id_hash(id: &str) -> u64 {
    let digest = Sha256::digest(id.as_bytes());
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

/// Backend serving mock extractions for a known set of charts. The raw
/// response is real JSON text, so the full parse path is exercised exactly as
/// with a live model.
pub struct MockBackend {
    charts: HashMap<String, ChartGroundTruth>,
    noise: NoiseModel,
}

impl MockBackend {
    pub fn new(charts: &[ChartGroundTruth], noise: NoiseModel) -> Result<Self> {
        noise.validate()?;
        let charts = charts.iter().map(|c| (c.id.clone(), c.clone())).collect();
        Ok(Self { charts, noise })
    }
}

impl ExtractorBackend for MockBackend {
    fn id(&self) -> String {
        format!(
            "mock:n{}:sigma{}:corrupt{}:drop{}:seed{}",
            self.noise.sample_count,
            self.noise.y_sigma_frac,
            self.noise.name_corruption_prob,
            self.noise.series_drop_prob,
            self.noise.seed
        )
    }

    fn fetch(&self, request: &ExtractionRequest<'_>) -> Result<String> {
        let gt = self.charts.get(request.chart_id).ok_or_else(|| {
            Error::BackendFatal(format!(
                "mock backend has no ground truth for chart {:?}",
                request.chart_id
            ))
        })?;
        let result = mock_extract(gt, &self.noise)?;
        Ok(serde_json::to_string_pretty(&result).expect("extraction serializes"))
    }
}
