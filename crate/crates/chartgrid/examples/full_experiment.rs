//! The complete comparative experiment, offline: generate 23 charts, overlay
//! the grid arm, extract with two mock arms (the noisier one standing in for
//! the baseline), evaluate SMAPE per chart, and build the comparison report
//! with a Wilcoxon significance test.
//!
//! ```bash
//! cargo run --example full_experiment
//! ```

use chartgrid::extract::NoiseModel;
use chartgrid::runner::{cmd_run, RunPaths};
use chartgrid::ExperimentConfig;

fn main() -> chartgrid::Result<()> {
    let root = std::path::Path::new("target/example-output/full-experiment");

    let mut config = ExperimentConfig::mock_two_arm(
        NoiseModel { y_sigma_frac: 0.10, seed: 7, ..Default::default() },
        NoiseModel { y_sigma_frac: 0.05, seed: 7, ..Default::default() },
    );
    config.output_dir = root.join("out");
    config.cache_dir = root.join("cache");

    let report = cmd_run(&config)?;

    println!("\n=== comparison ===");
    for method in &report.methods {
        println!(
            "{:<10} mean SMAPE {:6.2}%  std {:6.2}%  median {:6.2}%",
            method.name, method.mean_smape, method.std_dev, method.boxplot.median,
        );
    }
    for pair in &report.wilcoxon {
        match &pair.wilcoxon {
            Some(w) => println!(
                "{} vs {}: W = {}, p = {:.6} ({})",
                pair.method_a,
                pair.method_b,
                w.w_statistic,
                w.p_value,
                if w.significant { "significant at 0.05" } else { "not significant" },
            ),
            None => println!(
                "{} vs {}: n/a ({})",
                pair.method_a,
                pair.method_b,
                pair.note.as_deref().unwrap_or("no test"),
            ),
        }
    }

    let paths = RunPaths::new(&config.output_dir);
    println!("\nartifacts:");
    for p in [
        paths.report_md(),
        paths.report_json(),
        paths.scores_csv(),
        paths.boxplot_csv(),
        paths.qualitative_dir(),
    ] {
        println!("  {}", p.display());
    }
    println!("\nrerunning reuses the cache: no extraction is recomputed.");
    Ok(())
}
