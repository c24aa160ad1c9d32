//! Vendor-neutral remote backend: HTTPS JSON in, model text out.
//!
//! Request body: `{"model": <name>, "prompt": <text>, "image_png_base64": <image>}`.
//! The response is either a JSON object with a `"text"` field or a raw text
//! body; both are accepted. Endpoint, model name, auth header, and the
//! environment variable holding the API key are all configuration, so any
//! hosted multimodal completion endpoint (or a thin proxy in front of one)
//! can serve as the extractor.

use std::time::Duration;

use base64::Engine;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extract::{ExtractionRequest, ExtractorBackend};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetryPolicy {
    #[serde(default = "default_attempts")]
    pub max_attempts: u32,
    #[serde(default = "default_backoff_ms")]
    pub initial_backoff_ms: u64,
}

fn default_attempts() -> u32 {
    3
}

fn default_backoff_ms() -> u64 {
    1000
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self { max_attempts: default_attempts(), initial_backoff_ms: default_backoff_ms() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemoteConfig {
    pub endpoint: String,
    pub model: String,
    /// Name of the environment variable holding the API key.
    pub api_key_env: String,
    /// Header carrying the key; the value sent is `auth_prefix + key`.
    #[serde(default = "default_auth_header")]
    pub auth_header: String,
    #[serde(default = "default_auth_prefix")]
    pub auth_prefix: String,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
    #[serde(default)]
    pub retry: RetryPolicy,
}

fn default_auth_header() -> String {
    "authorization".into()
}

fn default_auth_prefix() -> String {
    "Bearer ".into()
}

fn default_timeout_secs() -> u64 {
    60
}

impl RemoteConfig {
    pub fn validate(&self) -> Result<()> {
        for (field, value) in [
            ("backend.endpoint", &self.endpoint),
            ("backend.model", &self.model),
            ("backend.api_key_env", &self.api_key_env),
        ] {
            if value.trim().is_empty() {
                return Err(Error::Config(format!("{field}: must be non-empty")));
            }
        }
        if self.retry.max_attempts == 0 {
            return Err(Error::Config("backend.retry.max_attempts: must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct WireRequest<'a> {
    model: &'a str,
    prompt: &'a str,
    image_png_base64: String,
}

pub struct RemoteBackend {
    config: RemoteConfig,
    api_key: String,
    client: reqwest::blocking::Client,
}

impl RemoteBackend {
    /// Builds the backend, reading the API key from the configured environment
    /// variable. A missing key is fatal before any network call.
    pub fn new(config: RemoteConfig) -> Result<Self> {
        config.validate()?;
        let api_key = std::env::var(&config.api_key_env).map_err(|_| {
            Error::BackendFatal(format!(
                "environment variable {} is not set (required for {})",
                config.api_key_env, config.endpoint
            ))
        })?;
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(config.timeout_secs))
            .build()
            .map_err(|e| Error::BackendFatal(format!("http client: {e}")))?;
        Ok(Self { config, api_key, client })
    }

    fn attempt(&self, request: &ExtractionRequest<'_>) -> Result<String> {
        let body = WireRequest {
            model: &self.config.model,
            prompt: request.prompt,
            image_png_base64: base64::engine::general_purpose::STANDARD.encode(request.image_png),
        };
        let response = self
            .client
            .post(&self.config.endpoint)
            .header(&self.config.auth_header, format!("{}{}", self.config.auth_prefix, self.api_key))
            .json(&body)
            .send()
            .map_err(|e| Error::Backend(format!("transport: {e}")))?;

        let status = response.status();
        let text = response
            .text()
            .map_err(|e| Error::Backend(format!("reading response body: {e}")))?;

        if status == reqwest::StatusCode::UNAUTHORIZED || status == reqwest::StatusCode::FORBIDDEN {
            return Err(Error::BackendFatal(format!("authentication failed ({status}): {text}")));
        }
        if !status.is_success() {
            return Err(Error::Backend(format!("http {status}: {text}")));
        }

        // Prefer {"text": ...}; fall back to the raw body.
        if let Ok(value) = serde_json::from_str::<serde_json::Value>(&text) {
            if let Some(inner) = value.get("text").and_then(|t| t.as_str()) {
                return Ok(inner.to_string());
            }
        }
        Ok(text)
    }
}

impl ExtractorBackend for RemoteBackend {
    fn id(&self) -> String {
        format!("{}@{}", self.config.model, self.config.endpoint)
    }

    /// Calls the endpoint with exponential backoff. Transient failures are
    /// retried up to `max_attempts`; authentication failures abort at once.
    fn fetch(&self, request: &ExtractionRequest<'_>) -> Result<String> {
        let mut backoff = Duration::from_millis(self.config.retry.initial_backoff_ms);
        let mut last_err = None;
        for attempt in 0..self.config.retry.max_attempts {
            if attempt > 0 {
                std::thread::sleep(backoff);
                backoff *= 2;
            }
            match self.attempt(request) {
                Ok(text) => return Ok(text),
                Err(fatal @ Error::BackendFatal(_)) => return Err(fatal),
                Err(e) => last_err = Some(e),
            }
        }
        Err(last_err.unwrap_or_else(|| Error::Backend("no attempts made".into())))
    }
}
