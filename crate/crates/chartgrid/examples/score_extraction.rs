//! Score extractions against gold: linear interpolation onto the gold x grid,
//! then SMAPE per series with a point-weighted chart mean. Failures cost the
//! 200% ceiling.
//!
//! ```bash
//! cargo run --example score_extraction
//! ```

use chartgrid::dataset::{build_dataset, DatasetConfig};
use chartgrid::eval::{interpolate_to_grid, score_chart, smape};
use chartgrid::extract::{mock_extract, NoiseModel};

fn main() -> chartgrid::Result<()> {
    println!("smape([100], [100]) = {:.4}", smape(&[100.0], &[100.0])?);
    println!("smape([100], [50])  = {:.4}", smape(&[100.0], &[50.0])?);
    println!("smape([0], [0])     = {:.4}  (0/0 term defined as 0)", smape(&[0.0], &[0.0])?);

    let points = [(0.0, 0.0), (4.0, 8.0), (10.0, 2.0)];
    let queried = interpolate_to_grid(&points, &[2.0, 7.0, 12.0])?;
    println!("\ninterpolating {points:?} at x = [2, 7, 12] -> {queried:?} (clamped past the end)");

    let charts = build_dataset(&DatasetConfig { count: 4, ..Default::default() }, 3)?;
    let gt = &charts[2];
    println!("\nchart {} with {} series:", gt.id, gt.series.len());

    for (label, noise) in [
        ("exact (100 samples, zero noise)", NoiseModel { sample_count: 100, ..Default::default() }),
        ("sparse (20 samples, zero noise)", NoiseModel::default()),
        ("noisy  (20 samples, 5% sigma)", NoiseModel { y_sigma_frac: 0.05, ..Default::default() }),
        ("very noisy (20 samples, 20% sigma)", NoiseModel { y_sigma_frac: 0.20, ..Default::default() }),
    ] {
        let extraction = mock_extract(gt, &noise)?;
        let score = score_chart(gt, Some(&extraction), "demo");
        println!("  {label:<36} SMAPE = {:8.4}%", score.smape);
    }

    let failed = score_chart(gt, None, "demo");
    println!("  {:<36} SMAPE = {:8.4}%", "failed parse (ceiling)", failed.smape);
    Ok(())
}
