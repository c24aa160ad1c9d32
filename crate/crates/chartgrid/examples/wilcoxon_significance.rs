//! The Wilcoxon signed-rank test on paired per-chart scores: exact two-sided
//! p-values up to 25 pairs (covering a 23-chart benchmark), normal
//! approximation beyond.
//!
//! ```bash
//! cargo run --example wilcoxon_significance
//! ```

use chartgrid::stats::{boxplot_stats, descriptive, wilcoxon_signed_rank};

fn main() -> chartgrid::Result<()> {
    // All five differences positive: W = 0, the strongest possible n=5 result.
    let a = [2.0, 3.0, 4.0, 5.0, 6.0];
    let b = [1.0, 1.0, 1.0, 1.0, 1.0];
    let result = wilcoxon_signed_rank(&a, &b)?;
    println!(
        "d = [1..5]: W = {}, exact two-sided p = {} ({} at alpha = 0.05)",
        result.w_statistic,
        result.p_value,
        if result.significant { "significant" } else { "not significant" },
    );

    // A 23-chart shaped comparison: method B consistently a bit better.
    let baseline: Vec<f64> = (0..23).map(|i| 20.0 + (i as f64 * 7.3) % 30.0).collect();
    let grid: Vec<f64> = baseline
        .iter()
        .enumerate()
        .map(|(i, v)| v - 4.0 + ((i * 13) % 7) as f64)
        .collect();

    let (mean_a, std_a) = descriptive(&baseline)?;
    let (mean_b, std_b) = descriptive(&grid)?;
    println!("\nbaseline: mean {mean_a:.2}%, std {std_a:.2}%");
    println!("grid:     mean {mean_b:.2}%, std {std_b:.2}%");

    let result = wilcoxon_signed_rank(&baseline, &grid)?;
    println!(
        "wilcoxon over {} pairs ({:?} mode): W = {}, p = {:.6}, significant = {}",
        result.n_effective, result.mode, result.w_statistic, result.p_value, result.significant,
    );

    let box_a = boxplot_stats(&baseline)?;
    println!(
        "\nbaseline box plot: median {:.2}, box [{:.2}, {:.2}], whiskers [{:.2}, {:.2}], {} outliers",
        box_a.median,
        box_a.q1,
        box_a.q3,
        box_a.whisker_low,
        box_a.whisker_high,
        box_a.outliers.len(),
    );
    Ok(())
}
