//! Prompt strategies.
//!
//! The grid arm reuses the baseline prompt byte for byte: spatial priming
//! changes the image, never the instructions. The chain-of-thought variant
//! inserts step-by-step guidance ahead of the schema demand, so the schema
//! block stays a verbatim suffix of every rendered prompt.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Task text sent for every strategy. Overridable per experiment; the
/// rendered prompt's hash is recorded for provenance.
pub const DEFAULT_TEMPLATE: &str = "\
You are given an image of a line chart. Extract the chart's data as precisely as you can.
First read the axis tick labels to calibrate the coordinate system, then report every data \
series as (x, y) points in data units, sampling enough points to capture the curve's shape. \
Report x and y in the units shown on the axes (plain numbers, no unit suffixes).";

/// Step-by-step reasoning instructions for the chain-of-thought strategy.
pub const COT_STEPS: &str = "\
Work through the chart step by step before answering:
1. Identify the x-axis range and tick spacing, then the y-axis range and tick spacing.
2. Identify each data series and its legend name.
3. Trace each series from left to right, estimating coordinates at regular intervals.
4. Only after completing these steps, produce the final answer.";

/// Output contract demanded from the model and validated by the parser.
pub const SCHEMA_BLOCK: &str = r#"Respond with a single JSON object and nothing else, using exactly this schema:
{
  "label": "<chart title>",
  "x_axis": "<x axis label and units>",
  "y_axis": "<y axis label and units>",
  "series": [
    {"name": "<series name>", "points": [[x, y], [x, y], ...]}
  ]
}"#;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptKind {
    Baseline,
    ChainOfThought,
}

/// A prompt strategy: which kind, plus the task template it wraps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptStrategy {
    pub kind: PromptKind,
    #[serde(default = "default_template")]
    pub template: String,
}

fn default_template() -> String {
    DEFAULT_TEMPLATE.to_string()
}

impl PromptStrategy {
    pub fn baseline() -> Self {
        Self { kind: PromptKind::Baseline, template: default_template() }
    }

    pub fn chain_of_thought() -> Self {
        Self { kind: PromptKind::ChainOfThought, template: default_template() }
    }

    pub fn with_template(kind: PromptKind, template: impl Into<String>) -> Self {
        Self { kind, template: template.into() }
    }
}

/// Renders the full prompt text. Depends only on the strategy, never on the
/// arm, so baseline and grid arms receive identical text.
pub fn build_prompt(strategy: &PromptStrategy) -> String {
    match strategy.kind {
        PromptKind::Baseline => format!("{}\n\n{}", strategy.template, SCHEMA_BLOCK),
        PromptKind::ChainOfThought => {
            format!("{}\n\n{}\n\n{}", strategy.template, COT_STEPS, SCHEMA_BLOCK)
        }
    }
}

/// Hex SHA-256 of a rendered prompt, recorded in report fingerprints.
pub fn prompt_sha256(prompt: &str) -> String {
    hex::encode(Sha256::digest(prompt.as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn baseline_and_grid_share_one_prompt() {
        // Both arms render from the same strategy; there is no arm input at all.
        let a = build_prompt(&PromptStrategy::baseline());
        let b = build_prompt(&PromptStrategy::baseline());
        assert_eq!(a, b);
        assert_eq!(prompt_sha256(&a), prompt_sha256(&b));
    }

    #[test]
    fn cot_keeps_schema_block_as_verbatim_suffix() {
        let cot = build_prompt(&PromptStrategy::chain_of_thought());
        assert!(cot.ends_with(SCHEMA_BLOCK));
        assert!(cot.contains(COT_STEPS));
        let baseline = build_prompt(&PromptStrategy::baseline());
        assert!(baseline.ends_with(SCHEMA_BLOCK));
        assert_ne!(cot, baseline);
    }

    #[test]
    fn rendered_prompt_names_required_keys() {
        for strategy in [PromptStrategy::baseline(), PromptStrategy::chain_of_thought()] {
            let p = build_prompt(&strategy);
            for key in ["\"label\"", "\"x_axis\"", "\"y_axis\"", "\"series\""] {
                assert!(p.contains(key), "prompt missing {key}");
            }
        }
    }

    #[test]
    fn hash_is_stable_and_input_sensitive() {
        let p = build_prompt(&PromptStrategy::baseline());
        assert_eq!(prompt_sha256(&p), prompt_sha256(&p));
        assert_ne!(prompt_sha256(&p), prompt_sha256(&format!("{p} ")));
        assert_eq!(prompt_sha256(&p).len(), 64);
    }
}
