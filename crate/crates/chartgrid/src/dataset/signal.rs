//! Seeded signal generators for ground-truth series.
//!
//! Four families span smooth and volatile regimes: `sine` and `polynomial`
//! are closed-form, `random_walk` accumulates Gaussian steps, and `volatile`
//! is a random walk with transient impulse spikes on top.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dataset::SeriesData;
use crate::error::{Error, Result};

/// `n` equally spaced values covering `[a, b]` inclusive, with both endpoints
/// returned exactly.
///
/// Every producer of x grids in this crate goes through this function so that
/// grids built from the same endpoints are bitwise identical.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least two points");
    let span = b - a;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + span * i as f64 / (n - 1) as f64 })
        .collect()
}

/// One generator family with its shape parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignalFamily {
    Sine {
        amplitude: f64,
        #[serde(default = "default_frequency")]
        frequency: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        offset: f64,
    },
    RandomWalk {
        #[serde(default)]
        start: f64,
        step_sigma: f64,
    },
    /// Random walk plus impulse noise: each sample independently spikes with
    /// probability `impulse_prob`, by `impulse_scale` times a standard normal.
    Volatile {
        #[serde(default)]
        start: f64,
        step_sigma: f64,
        impulse_prob: f64,
        impulse_scale: f64,
    },
    /// Polynomial in the normalized coordinate t = (x - x0)/(x1 - x0), so the
    /// coefficient scale is independent of the x range.
    Polynomial { coeffs: Vec<f64> },
}

fn default_frequency() -> f64 {
    1.0
}

/// What to generate: a named series of one family over an x range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSpec {
    pub name: String,
    pub family: SignalFamily,
    pub x_range: (f64, f64),
}

impl SignalSpec {
    /// Parses a spec from JSON. Unknown family names are configuration errors.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("signal spec: {e}")))
    }
}

/// Generates a ground-truth series: `n_points` samples of `spec` on an equally
/// spaced x grid. Deterministic for a fixed (spec, n_points, seed).
pub fn generate_series(spec: &SignalSpec, n_points: usize, seed: u64) -> Result<SeriesData> {
    if n_points < 2 {
        return Err(Error::Config(format!(
            "n_points: must be at least 2, got {n_points}"
        )));
    }
    let (x0, x1) = spec.x_range;
    if !(x0 < x1) {
        return Err(Error::Config(format!(
            "x_range: min must be below max, got ({x0}, {x1})"
        )));
    }

    let xs = linspace(x0, x1, n_points);
    let ys = match &spec.family {
        SignalFamily::Sine { amplitude, frequency, phase, offset } => xs
            .iter()
            .map(|&x| offset + amplitude * (frequency * x + phase).sin())
            .collect(),
        SignalFamily::RandomWalk { start, step_sigma } => {
            walk(*start, *step_sigma, n_points, seed)?
        }
        SignalFamily::Volatile { start, step_sigma, impulse_prob, impulse_scale } => {
            if !(0.0..=1.0).contains(impulse_prob) {
                return Err(Error::Config(format!(
                    "impulse_prob: must be in [0, 1], got {impulse_prob}"
                )));
            }
            let base = walk(*start, *step_sigma, n_points, seed)?;
            // Impulses come from a separate stream position: draw them after
            // the walk from the same rng, which keeps one seed per series.
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
            let unit = Normal::new(0.0, 1.0).expect("unit normal");
            base.into_iter()
                .map(|y| {
                    if rng.random::<f64>() < *impulse_prob {
                        y + impulse_scale * unit.sample(&mut rng)
                    } else {
                        y
                    }
                })
                .collect()
        }
        SignalFamily::Polynomial { coeffs } => {
            if coeffs.is_empty() {
                return Err(Error::Config("polynomial: coeffs must be non-empty".into()));
            }
            xs.iter()
                .map(|&x| {
                    let t = (x - x0) / (x1 - x0);
                    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
                })
                .collect()
        }
    };

    let points = xs.into_iter().zip(ys).collect();
    Ok(SeriesData { name: spec.name.clone(), points })
}

fn walk(start: f64, step_sigma: f64, n_points: usize, seed: u64) -> Result<Vec<f64>> {
    if step_sigma < 0.0 {
        return Err(Error::Config(format!(
            "step_sigma: must be non-negative, got {step_sigma}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let steps = Normal::new(0.0, step_sigma)
        .map_err(|e| Error::Config(format!("step_sigma: {e}")))?;
    let mut y = start;
    let mut out = Vec::with_capacity(n_points);
    out.push(y);
    for _ in 1..n_points {
        y += steps.sample(&mut rng);
        out.push(y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine_unit() -> SignalSpec {
        SignalSpec {
            name: "s".into(),
            family: SignalFamily::Sine { amplitude: 1.0, frequency: 1.0, phase: 0.0, offset: 0.0 },
            x_range: (0.0, std::f64::consts::TAU),
        }
    }

    #[test]
    fn sine_hits_known_values() {
        let series = generate_series(&sine_unit(), 5, 123).unwrap();
        let expected = [0.0, 1.0, 0.0, -1.0, 0.0];
        for (i, ((_, y), want)) in series.points.iter().zip(expected).enumerate() {
            assert!((y - want).abs() < 1e-12, "point {i}: {y} vs {want}");
        }
        let xs: Vec<f64> = series.points.iter().map(|p| p.0).collect();
        let expect_x = [0.0, 1.0, 2.0, 3.0, 4.0].map(|k| k * std::f64::consts::TAU / 4.0);
        for (x, want) in xs.iter().zip(expect_x) {
            assert!((x - want).abs() < 1e-12);
        }
    }

    #[test]
    fn random_walk_is_deterministic() {
        let spec = SignalSpec {
            name: "w".into(),
            family: SignalFamily::RandomWalk { start: 10.0, step_sigma: 2.0 },
            x_range: (0.0, 100.0),
        };
        let a = generate_series(&spec, 100, 7).unwrap();
        let b = generate_series(&spec, 100, 7).unwrap();
        assert_eq!(a, b);
        let c = generate_series(&spec, 100, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn x_values_are_equally_spaced() {
        let spec = sine_unit();
        let series = generate_series(&spec, 100, 0).unwrap();
        assert_eq!(series.points.len(), 100);
        let step = series.points[1].0 - series.points[0].0;
        for pair in series.points.windows(2) {
            assert!((pair[1].0 - pair[0].0 - step).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut spec = sine_unit();
        assert!(matches!(generate_series(&spec, 1, 0), Err(Error::Config(_))));
        spec.x_range = (1.0, 1.0);
        assert!(matches!(generate_series(&spec, 10, 0), Err(Error::Config(_))));
        let poly = SignalSpec {
            name: "p".into(),
            family: SignalFamily::Polynomial { coeffs: vec![] },
            x_range: (0.0, 1.0),
        };
        assert!(matches!(generate_series(&poly, 10, 0), Err(Error::Config(_))));
    }

    // Frozen output of the volatile generator at (start=50, step_sigma=2,
    // impulse_prob=0.08, impulse_scale=12, x in [0,100], n=100, seed=3),
    // recorded once from this generator. Any change to the stream layout or
    // the rng choice will show up here.
    #[rustfmt::skip]
    const VOLATILE_SEED3_Y: [f64; 100] = [
        50.0, 56.48128917589268, 48.620668449989275, 47.7821358398436,
        46.729451796360415, 46.65369738176656, 50.095651258276554, 46.925335215800935,
        46.04569730499466, 45.13847930407797, 42.976422193291555, 45.9305632928865,
        49.12946825502969, 48.39169249019393, 50.43019116915385, 51.42551563088834,
        50.129125486935166, 48.57064099977626, 49.06786281630758, 51.638196288801055,
        58.38084636006318, 55.485186998722824, 56.04723620930027, 55.99852857539255,
        56.334945322331, 55.00513859907541, 56.91018085449054, 57.46331948782264,
        58.62216394805234, 51.6314553428285, 58.22509580718293, 55.352071100520234,
        56.890751621758056, 55.37787441631726, 52.68381166438808, 56.456767918769366,
        58.86780544540674, 61.591355925893055, 64.2228723243104, 65.6676422804116,
        63.41767775918996, 61.99109818855429, 62.710741283865346, 58.28928616189703,
        55.28115799577513, 59.38160999406298, 58.753301098890624, 59.82784702437554,
        62.151162394251955, 60.422340874306784, 61.41593323641784, 60.14666703281687,
        61.147331825924766, 61.17308594661636, 55.8650497477076, 60.97279843486373,
        60.7445363445483, 56.08887127889195, 55.64763590665378, 53.83026920143952,
        54.34281898989672, 52.56317125396234, 54.02572539562972, 52.26979833843996,
        53.223327088785446, 51.7301930567812, 50.96465655864713, 51.61981734880632,
        54.584307198928414, 56.76933372276043, 69.92797826725885, 56.61833303554809,
        56.98722632372197, 56.201031690666795, 43.63338164258441, 53.72213376453833,
        53.46204585182083, 53.77880827940385, 54.682122085000415, 53.769594486452156,
        52.76133015279203, 54.41475827697682, 51.71577040058593, 53.87477076734144,
        57.06779676198921, 54.93117768272089, 52.47173715346273, 58.45862079054041,
        57.08566423068648, 51.99776106333844, 56.28755313485809, 64.89628979897897,
        52.56206739621259, 52.65956770408313, 49.53609522818914, 48.67315235993409,
        45.555758539049044, 49.43590697578549, 49.201854236732565, 51.055729346519946,
    ];

    #[test]
    fn volatile_matches_frozen_fixture() {
        let spec = SignalSpec {
            name: "volatile".into(),
            family: SignalFamily::Volatile {
                start: 50.0,
                step_sigma: 2.0,
                impulse_prob: 0.08,
                impulse_scale: 12.0,
            },
            x_range: (0.0, 100.0),
        };
        let series = generate_series(&spec, 100, 3).unwrap();
        for (i, ((_, y), want)) in series.points.iter().zip(VOLATILE_SEED3_Y).enumerate() {
            assert_eq!(*y, want, "index {i}");
        }
    }

    #[test]
    fn unknown_family_is_a_config_error() {
        let err = SignalSpec::from_json(
            r#"{"name":"s","family":{"kind":"sawtooth","amplitude":1.0},"x_range":[0.0,1.0]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config(_)), "got {err:?}");
        assert!(err.to_string().contains("sawtooth") || err.to_string().contains("unknown"));
    }

    #[test]
    fn polynomial_matches_horner_by_hand() {
        let spec = SignalSpec {
            name: "p".into(),
            family: SignalFamily::Polynomial { coeffs: vec![2.0, -1.0, 3.0] },
            x_range: (0.0, 10.0),
        };
        let series = generate_series(&spec, 3, 0).unwrap();
        // t = 0, 0.5, 1 -> 2 - t + 3t^2
        let expected = [2.0, 2.25, 4.0];
        for ((_, y), want) in series.points.iter().zip(expected) {
            assert!((y - want).abs() < 1e-12);
        }
    }
}
