//! Descriptive statistics, Tukey box-plot summaries, and the Wilcoxon
//! signed-rank test.
//!
//! The Wilcoxon p-value is two-sided. Up to 25 effective pairs the null
//! distribution is computed exactly by dynamic programming over sign
//! assignments of the observed (possibly tied) ranks, which covers a
//! 23-chart benchmark with no approximation; larger samples use the normal
//! approximation with tie and continuity corrections.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Largest n for which the exact null distribution is enumerated.
pub const EXACT_CUTOFF: usize = 25;

/// Significance level for the signed-rank decision.
pub const ALPHA: f64 = 0.05;

/// Arithmetic mean and sample standard deviation (n-1 denominator).
pub fn descriptive(scores: &[f64]) -> Result<(f64, f64)> {
    if scores.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "sample standard deviation needs at least 2 values, got {}",
            scores.len()
        )));
    }
    let n = scores.len() as f64;
    let mean = scores.iter().sum::<f64>() / n;
    let ss: f64 = scores.iter().map(|v| (v - mean).powi(2)).sum();
    Ok((mean, (ss / (n - 1.0)).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PValueMode {
    Exact,
    NormalApprox,
}

/// How to compute the p-value; `Auto` picks exact up to [`EXACT_CUTOFF`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WilcoxonMethod {
    Auto,
    Exact,
    NormalApprox,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// min(W+, W-), the smaller signed-rank sum.
    pub w_statistic: f64,
    /// Pairs remaining after zero differences are removed.
    pub n_effective: usize,
    /// Two-sided p-value.
    pub p_value: f64,
    pub mode: PValueMode,
    /// `p_value < 0.05`.
    pub significant: bool,
}

/// Two-sided Wilcoxon signed-rank test on paired samples.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonResult> {
    wilcoxon_signed_rank_method(a, b, WilcoxonMethod::Auto)
}

/// Like [`wilcoxon_signed_rank`] with an explicit p-value method.
pub fn wilcoxon_signed_rank_method(
    a: &[f64],
    b: &[f64],
    method: WilcoxonMethod,
) -> Result<WilcoxonResult> {
    if a.len() != b.len() {
        return Err(Error::Evaluation(format!(
            "paired samples differ in length: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|d| *d != 0.0).collect();
    let n = diffs.len();
    if n < 5 {
        return Err(Error::InsufficientData(format!(
            "signed-rank test needs at least 5 non-zero differences, got {n}"
        )));
    }

    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = assign_ranks(&abs);
    let w_plus: f64 = diffs.iter().zip(&ranks).filter(|(d, _)| **d > 0.0).map(|(_, r)| r).sum();
    let w_minus: f64 = diffs.iter().zip(&ranks).filter(|(d, _)| **d < 0.0).map(|(_, r)| r).sum();
    // empty rank sums come out as -0.0; W is non-negative by construction
    let w = w_plus.min(w_minus).abs();

    let use_exact = match method {
        WilcoxonMethod::Auto => n <= EXACT_CUTOFF,
        WilcoxonMethod::Exact => true,
        WilcoxonMethod::NormalApprox => false,
    };

    let (p_value, mode) = if use_exact {
        (exact_two_sided_p(&ranks, w), PValueMode::Exact)
    } else {
        (normal_two_sided_p(&abs, &ranks, w), PValueMode::NormalApprox)
    };

    Ok(WilcoxonResult {
        w_statistic: w,
        n_effective: n,
        p_value,
        mode,
        significant: p_value < ALPHA,
    })
}

/// Exact two-sided p: 2 * P(W+ <= w) under the null, where W+ sums a uniform
/// random subset of the observed ranks. Ties are handled by enumerating over
/// the observed (averaged) rank values; doubling all ranks makes them
/// integers, and a subset-sum count gives the distribution.
fn exact_two_sided_p(ranks: &[f64], w: f64) -> f64 {
    let scaled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let total: usize = scaled.iter().sum();
    let mut counts = vec![0u64; total + 1];
    counts[0] = 1;
    for &r in &scaled {
        for s in (r..=total).rev() {
            counts[s] += counts[s - r];
        }
    }
    let w2 = (2.0 * w).round() as usize;
    let below: u64 = counts[..=w2.min(total)].iter().sum();
    let all = 2f64.powi(ranks.len() as i32);
    (2.0 * below as f64 / all).min(1.0)
}

/// Normal approximation with tie correction on the variance and a 0.5
/// continuity correction toward the mean.
fn normal_two_sided_p(abs: &[f64], ranks: &[f64], w: f64) -> f64 {
    let n = ranks.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let tie_term: f64 = tie_group_sizes(abs)
        .into_iter()
        .map(|t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum::<f64>()
        / 48.0;
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term;
    let z = (w - mean + 0.5) / var.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    (2.0 * normal.cdf(z)).min(1.0)
}

fn tie_group_sizes(values: &[f64]) -> Vec<usize> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut groups = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        groups.push(j - i);
        i = j;
    }
    groups
}

/// 1-based ranks with average ranks for ties.
fn assign_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j + 1) as f64 / 2.0; // mean of 1-based ranks i+1 ..= j
        for &idx in &order[i..j] {
            ranks[idx] = avg;
        }
        i = j;
    }
    ranks
}

/// Box-plot summary in the Tukey convention.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxplotStats {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    /// Most extreme data points within 1.5 IQR of the quartiles.
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outliers: Vec<f64>,
}

/// Tukey box-plot statistics: quartiles by linear interpolation of order
/// statistics, whiskers anchored at the most extreme data points within
/// 1.5 IQR of the box, everything beyond listed as outliers.
pub fn boxplot_stats(scores: &[f64]) -> Result<BoxplotStats> {
    if scores.is_empty() {
        return Err(Error::InsufficientData("boxplot needs at least one value".into()));
    }
    let mut sorted = scores.to_vec();
    sorted.sort_by(f64::total_cmp);

    let q1 = quantile(&sorted, 0.25);
    let median = quantile(&sorted, 0.5);
    let q3 = quantile(&sorted, 0.75);
    let iqr = q3 - q1;
    let lo_fence = q1 - 1.5 * iqr;
    let hi_fence = q3 + 1.5 * iqr;

    let whisker_low = sorted.iter().copied().find(|v| *v >= lo_fence).unwrap_or(sorted[0]);
    let whisker_high =
        sorted.iter().rev().copied().find(|v| *v <= hi_fence).unwrap_or(sorted[sorted.len() - 1]);
    let outliers = sorted.iter().copied().filter(|v| *v < lo_fence || *v > hi_fence).collect();

    Ok(BoxplotStats { median, q1, q3, whisker_low, whisker_high, outliers })
}

/// Linear interpolation of order statistics on a sorted slice.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 < sorted.len() {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    } else {
        sorted[lo]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent oracle: enumerate all 2^n sign assignments of the observed
    /// ranks, count assignments whose positive-rank sum is at most w.
    fn brute_force_two_sided_p(ranks: &[f64], w: f64) -> f64 {
        let n = ranks.len();
        let mut below = 0u64;
        for mask in 0u64..(1u64 << n) {
            let sum: f64 =
                (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
            if sum <= w + 1e-9 {
                below += 1;
            }
        }
        (2.0 * below as f64 / (1u64 << n) as f64).min(1.0)
    }

    #[test]
    fn descriptive_hand_cases() {
        let (mean, std) = descriptive(&[10.0, 20.0, 30.0]).unwrap();
        assert_eq!(mean, 20.0);
        assert_eq!(std, 10.0);
        let (mean, std) = descriptive(&[5.0, 5.0, 5.0]).unwrap();
        assert_eq!(mean, 5.0);
        assert_eq!(std, 0.0);
        assert!(matches!(descriptive(&[1.0]), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn all_positive_differences_give_minimal_p() {
        let a = [2.0, 3.0, 4.0, 5.0, 6.0];
        let b = [1.0, 1.0, 1.0, 1.0, 1.0];
        // d = [1, 2, 3, 4, 5]
        let result = wilcoxon_signed_rank(&a, &b).unwrap();
        assert_eq!(result.w_statistic, 0.0);
        assert_eq!(result.n_effective, 5);
        assert_eq!(result.p_value, 2.0 / 32.0);
        assert_eq!(result.mode, PValueMode::Exact);
        assert!(!result.significant); // 0.0625 >= 0.05
    }

    #[test]
    fn identical_samples_are_insufficient() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        assert!(matches!(
            wilcoxon_signed_rank(&a, &a),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn twenty_three_pairs_use_exact_mode() {
        let a: Vec<f64> = (0..23).map(|i| i as f64).collect();
        let b: Vec<f64> = (0..23).map(|i| i as f64 + if i % 2 == 0 { 1.5 } else { -0.5 }).collect();
        let result = wilcoxon_signed_rank(&a, &b).unwrap();
        assert_eq!(result.n_effective, 23);
        assert_eq!(result.mode, PValueMode::Exact);
    }

    #[test]
    fn exact_matches_brute_force_with_and_without_ties() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in 5..=12usize {
            for _ in 0..20 {
                // integer-ish values force ties in |d| regularly
                let a: Vec<f64> = (0..n).map(|_| rng.random_range(0..8) as f64).collect();
                let b: Vec<f64> = (0..n).map(|_| rng.random_range(0..8) as f64).collect();
                let diffs: Vec<f64> =
                    a.iter().zip(&b).map(|(x, y)| x - y).filter(|d| *d != 0.0).collect();
                if diffs.len() < 5 {
                    continue;
                }
                let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
                let ranks = assign_ranks(&abs);
                let w_plus: f64 =
                    diffs.iter().zip(&ranks).filter(|(d, _)| **d > 0.0).map(|(_, r)| r).sum();
                let w_minus: f64 =
                    diffs.iter().zip(&ranks).filter(|(d, _)| **d < 0.0).map(|(_, r)| r).sum();
                let w = w_plus.min(w_minus);

                let got = wilcoxon_signed_rank(&a, &b).unwrap();
                let want = brute_force_two_sided_p(&ranks, w);
                assert!(
                    (got.p_value - want).abs() < 1e-12,
                    "n={n}: dp {} vs brute {want}",
                    got.p_value
                );
            }
        }
    }

    #[test]
    fn swap_symmetry() {
        let a = [3.0, 1.0, 4.0, 1.5, 9.0, 2.6, 5.3, 5.8];
        let b = [2.0, 2.0, 5.0, 0.5, 7.0, 3.6, 5.0, 6.8];
        let ab = wilcoxon_signed_rank(&a, &b).unwrap();
        let ba = wilcoxon_signed_rank(&b, &a).unwrap();
        assert_eq!(ab.w_statistic, ba.w_statistic);
        assert_eq!(ab.p_value, ba.p_value);
    }

    #[test]
    fn constant_shift_gives_minimal_attainable_p() {
        let a: Vec<f64> = vec![1.0, 2.5, 4.0, 7.0, 11.0, 16.0, 22.0];
        let b: Vec<f64> = a.iter().map(|v| v + 3.0).collect();
        let result = wilcoxon_signed_rank(&a, &b).unwrap();
        let n = a.len() as i32;
        assert_eq!(result.p_value, 2.0 / 2f64.powi(n));
    }

    #[test]
    fn normal_approx_tracks_exact_at_the_cutoff() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let a: Vec<f64> = (0..25).map(|_| rng.random_range(-10.0..10.0)).collect();
            let b: Vec<f64> = (0..25).map(|_| rng.random_range(-10.0..10.0)).collect();
            let exact = wilcoxon_signed_rank_method(&a, &b, WilcoxonMethod::Exact).unwrap();
            let approx =
                wilcoxon_signed_rank_method(&a, &b, WilcoxonMethod::NormalApprox).unwrap();
            assert!(
                (exact.p_value - approx.p_value).abs() < 0.02,
                "exact {} vs approx {}",
                exact.p_value,
                approx.p_value
            );
        }
    }

    #[test]
    fn significance_flag_matches_p() {
        let a: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let b: Vec<f64> = a.iter().map(|v| v + 1.0).collect();
        let result = wilcoxon_signed_rank(&a, &b).unwrap();
        assert_eq!(result.significant, result.p_value < ALPHA);
        assert!(result.significant); // 2/1024 << 0.05
    }

    #[test]
    fn boxplot_flags_the_far_outlier() {
        let stats = boxplot_stats(&[1.0, 2.0, 3.0, 4.0, 100.0]).unwrap();
        assert_eq!(stats.q1, 2.0);
        assert_eq!(stats.median, 3.0);
        assert_eq!(stats.q3, 4.0);
        // fence = 4 + 1.5*2 = 7 < 100
        assert_eq!(stats.outliers, vec![100.0]);
        assert_eq!(stats.whisker_low, 1.0);
        assert_eq!(stats.whisker_high, 4.0);
    }

    #[test]
    fn boxplot_degenerate_inputs() {
        let stats = boxplot_stats(&[5.0, 5.0, 5.0]).unwrap();
        assert_eq!((stats.median, stats.q1, stats.q3), (5.0, 5.0, 5.0));
        assert!(stats.outliers.is_empty());

        let stats = boxplot_stats(&[7.5]).unwrap();
        assert_eq!((stats.median, stats.q1, stats.q3), (7.5, 7.5, 7.5));
        assert_eq!((stats.whisker_low, stats.whisker_high), (7.5, 7.5));

        assert!(boxplot_stats(&[]).is_err());
    }

    #[test]
    fn boxplot_whiskers_bound_the_box() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.random_range(1..40usize);
            let data: Vec<f64> = (0..n).map(|_| rng.random_range(-50.0..150.0)).collect();
            let s = boxplot_stats(&data).unwrap();
            let lo = data.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = data.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!(lo <= s.whisker_low && s.whisker_low <= s.q1);
            assert!(s.q3 <= s.whisker_high && s.whisker_high <= hi);
            assert!(s.q1 <= s.median && s.median <= s.q3);
        }
    }

    #[test]
    fn ranks_average_ties() {
        let ranks = assign_ranks(&[1.0, 3.0, 2.0, 3.0, 5.0]);
        assert_eq!(ranks, vec![1.0, 3.5, 2.0, 3.5, 5.0]);
    }
}
