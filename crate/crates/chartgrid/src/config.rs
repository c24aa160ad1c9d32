//! Declarative experiment configuration: one JSON file drives the whole
//! pipeline, and every report embeds a fingerprint of it so results stay
//! traceable to exact inputs.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataset::DatasetConfig;
use crate::error::{Error, Result};
use crate::extract::{
    build_prompt, prompt_sha256, NoiseModel, PromptKind, PromptStrategy, RemoteConfig,
};
use crate::overlay::GridConfig;

/// Dataset shape plus its generation seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSection {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(flatten)]
    pub shape: DatasetConfig,
}

fn default_seed() -> u64 {
    1
}

impl Default for DatasetSection {
    fn default() -> Self {
        Self { seed: default_seed(), shape: DatasetConfig::default() }
    }
}

/// One experimental condition: a name, whether the grid preprocessor runs,
/// which prompt strategy is used, and (for the mock backend) its noise model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmConfig {
    pub name: String,
    #[serde(default)]
    pub use_grid: bool,
    #[serde(default = "default_prompt_kind")]
    pub prompt: PromptKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mock_noise: Option<NoiseModel>,
}

fn default_prompt_kind() -> PromptKind {
    PromptKind::Baseline
}

/// Which extractor answers: a live HTTP endpoint or the deterministic mock.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BackendConfig {
    Mock,
    Remote(RemoteConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub dataset: DatasetSection,
    #[serde(default)]
    pub grid: GridConfig,
    /// Task text shared by every arm; the default ships in code and the
    /// rendered prompt hash is recorded for provenance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prompt_template: Option<String>,
    pub arms: Vec<ArmConfig>,
    pub backend: BackendConfig,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_cache_dir")]
    pub cache_dir: PathBuf,
    #[serde(default = "default_max_in_flight")]
    pub max_in_flight: usize,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_cache_dir() -> PathBuf {
    PathBuf::from("cache")
}

fn default_max_in_flight() -> usize {
    2
}

impl ExperimentConfig {
    /// A two-arm (baseline vs. grid) mock experiment, the offline default.
    pub fn mock_two_arm(noise_baseline: NoiseModel, noise_grid: NoiseModel) -> Self {
        Self {
            dataset: DatasetSection::default(),
            grid: GridConfig::default(),
            prompt_template: None,
            arms: vec![
                ArmConfig {
                    name: "baseline".into(),
                    use_grid: false,
                    prompt: PromptKind::Baseline,
                    mock_noise: Some(noise_baseline),
                },
                ArmConfig {
                    name: "grid".into(),
                    use_grid: true,
                    prompt: PromptKind::Baseline,
                    mock_noise: Some(noise_grid),
                },
            ],
            backend: BackendConfig::Mock,
            output_dir: default_output_dir(),
            cache_dir: default_cache_dir(),
            max_in_flight: default_max_in_flight(),
        }
    }

    /// The prompt strategy of one arm, with any template override applied.
    pub fn prompt_strategy(&self, arm: &ArmConfig) -> PromptStrategy {
        match &self.prompt_template {
            Some(template) => PromptStrategy::with_template(arm.prompt, template.clone()),
            None => PromptStrategy { kind: arm.prompt, ..PromptStrategy::baseline() },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.arms.len() < 2 {
            return Err(Error::Config(format!(
                "arms: a comparison run needs at least 2 arms, got {}",
                self.arms.len()
            )));
        }
        let mut names = std::collections::HashSet::new();
        for (i, arm) in self.arms.iter().enumerate() {
            if arm.name.trim().is_empty() {
                return Err(Error::Config(format!("arms[{i}].name: must be non-empty")));
            }
            if !names.insert(arm.name.as_str()) {
                return Err(Error::Config(format!("arms[{i}].name: duplicate {:?}", arm.name)));
            }
            match (&self.backend, &arm.mock_noise) {
                (BackendConfig::Mock, None) => {
                    return Err(Error::Config(format!(
                        "arms[{i}].mock_noise: required when backend.kind = mock"
                    )));
                }
                (_, Some(noise)) => noise
                    .validate()
                    .map_err(|e| Error::Config(format!("arms[{i}].{e}")))?,
                _ => {}
            }
        }
        if let Some(template) = &self.prompt_template {
            if template.trim().is_empty() {
                return Err(Error::Config("prompt_template: must be non-empty".into()));
            }
        }
        if let BackendConfig::Remote(remote) = &self.backend {
            remote.validate()?;
        }
        if self.max_in_flight == 0 {
            return Err(Error::Config("max_in_flight: must be at least 1".into()));
        }
        if self.dataset.shape.styles.is_empty() {
            return Err(Error::Config("dataset.styles: must name at least one variant".into()));
        }
        Ok(())
    }

    /// Provenance string embedded in every report: dataset seed, grid
    /// parameters, per-arm prompt hashes, and the backend identity.
    pub fn fingerprint(&self) -> String {
        let prompts: Vec<String> = self
            .arms
            .iter()
            .map(|arm| {
                let hash = prompt_sha256(&build_prompt(&self.prompt_strategy(arm)));
                format!("{}:{}", arm.name, &hash[..12])
            })
            .collect();
        let backend = match &self.backend {
            BackendConfig::Mock => "mock".to_string(),
            BackendConfig::Remote(remote) => format!("{}@{}", remote.model, remote.endpoint),
        };
        format!(
            "dataset_seed={};count={};n_points={};grid={}x{}@{};prompts={};backend={}",
            self.dataset.seed,
            self.dataset.shape.count,
            self.dataset.shape.n_points,
            self.grid.cells_per_axis,
            self.grid.cells_per_axis,
            self.grid.opacity,
            prompts.join(","),
            backend
        )
    }
}

/// Reads and validates a config file (JSON).
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    let config: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| Error::ParseFile { path: path.to_path_buf(), message: e.to_string() })?;
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ExperimentConfig {
        ExperimentConfig::mock_two_arm(NoiseModel::default(), NoiseModel::default())
    }

    #[test]
    fn mock_two_arm_validates() {
        base().validate().unwrap();
    }

    #[test]
    fn validation_names_the_field() {
        let mut config = base();
        config.arms[1].name = "baseline".into();
        let err = config.validate().unwrap_err();
        assert!(err.to_string().contains("arms[1].name"), "{err}");

        let mut config = base();
        config.arms[0].mock_noise = None;
        let err = config.validate().unwrap_err();
        assert!(err.to_string().contains("arms[0].mock_noise"), "{err}");

        let mut config = base();
        config.arms.pop();
        assert!(config.validate().is_err());
    }

    #[test]
    fn arm_prompt_hashes_are_equal_across_grid_and_baseline() {
        let config = base();
        let a = build_prompt(&config.prompt_strategy(&config.arms[0]));
        let b = build_prompt(&config.prompt_strategy(&config.arms[1]));
        assert_eq!(a, b);
        assert_eq!(prompt_sha256(&a), prompt_sha256(&b));
    }

    #[test]
    fn fingerprint_tracks_inputs() {
        let config = base();
        let fp = config.fingerprint();
        assert!(fp.contains("dataset_seed=1"));
        assert!(fp.contains("grid=50x50@0.2"));
        assert!(fp.contains("backend=mock"));
        let mut changed = base();
        changed.dataset.seed = 2;
        assert_ne!(fp, changed.fingerprint());
        let mut changed = base();
        changed.prompt_template = Some("different task".into());
        assert_ne!(fp, changed.fingerprint());
    }

    #[test]
    fn config_file_roundtrip_and_parse_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.json");
        let config = base();
        std::fs::write(&path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
        let loaded = load_config(&path).unwrap();
        assert_eq!(loaded, config);

        std::fs::write(&path, "{not json").unwrap();
        assert!(matches!(load_config(&path), Err(Error::ParseFile { .. })));
    }

    #[test]
    fn remote_backend_requires_fields() {
        let mut config = base();
        config.backend = BackendConfig::Remote(RemoteConfig {
            endpoint: "".into(),
            model: "m".into(),
            api_key_env: "K".into(),
            auth_header: "authorization".into(),
            auth_prefix: "Bearer ".into(),
            timeout_secs: 30,
            retry: Default::default(),
        });
        // arms keep mock_noise set; that is allowed alongside a remote backend
        assert!(matches!(config.validate(), Err(Error::Config(_))));
    }
}
