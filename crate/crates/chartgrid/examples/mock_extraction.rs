//! The deterministic mock extractor: a seeded, noise-parameterized stand-in
//! for a live model. It subsamples the ground truth, so the whole pipeline
//! can be validated offline.
//!
//! ```bash
//! cargo run --example mock_extraction
//! ```

use chartgrid::dataset::{build_dataset, DatasetConfig};
use chartgrid::extract::{mock_extract, parse_extraction, MockBackend, NoiseModel};
use chartgrid::extract::{ExtractionRequest, ExtractorBackend};

fn main() -> chartgrid::Result<()> {
    let charts = build_dataset(&DatasetConfig { count: 4, ..Default::default() }, 1)?;
    let gt = &charts[0];
    println!("chart {} ({} series, 100 points each)", gt.id, gt.series.len());

    let clean = mock_extract(gt, &NoiseModel::default())?;
    println!("\nzero noise, 20 samples; first points of {:?}:", clean.series[0].name);
    for (x, y) in clean.series[0].points.iter().take(5) {
        println!("  ({x:.3}, {y:.3})");
    }

    let noisy_model = NoiseModel {
        y_sigma_frac: 0.05,
        name_corruption_prob: 0.2,
        series_drop_prob: 0.1,
        seed: 42,
        ..Default::default()
    };
    let noisy = mock_extract(gt, &noisy_model)?;
    println!("\nwith 5% y-noise, 20% name corruption, 10% series drop:");
    for series in &noisy.series {
        println!("  kept series {:?} with {} points", series.name, series.points.len());
    }

    let again = mock_extract(gt, &noisy_model)?;
    println!("\nsame seed reproduces the same extraction: {}", noisy == again);

    // The backend wraps the same data in raw JSON, exercising the parser
    // exactly like a live model response would.
    let backend = MockBackend::new(&charts, NoiseModel::default())?;
    let raw = backend.fetch(&ExtractionRequest {
        chart_id: &gt.id,
        prompt: "unused by the mock",
        image_png: &[],
    })?;
    let parsed = parse_extraction(&raw)?;
    println!("raw JSON response parses back to the same result: {}", parsed == clean);
    Ok(())
}
