//! Pluggable chart-to-data extraction: prompt strategies, response parsing,
//! a deterministic mock backend, a vendor-neutral remote backend, and a
//! content-addressed record cache.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod cache;
pub mod mock;
pub mod parse;
pub mod prompt;
pub mod remote;

pub use cache::{cache_key, Cache};
pub use mock::{mock_extract, MockBackend, NoiseModel};
pub use parse::parse_extraction;
pub use prompt::{build_prompt, prompt_sha256, PromptKind, PromptStrategy};
pub use remote::{RemoteBackend, RemoteConfig, RetryPolicy};

/// One extracted series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractedSeries {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

/// Parsed model output: chart label, free-text axis info, and sparse named
/// series. Serializes to the exact wire schema demanded from the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionResult {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(rename = "x_axis", default, skip_serializing_if = "Option::is_none")]
    pub x_axis_info: Option<String>,
    #[serde(rename = "y_axis", default, skip_serializing_if = "Option::is_none")]
    pub y_axis_info: Option<String>,
    pub series: Vec<ExtractedSeries>,
}

/// Everything a backend needs for one extraction call.
pub struct ExtractionRequest<'a> {
    pub chart_id: &'a str,
    pub prompt: &'a str,
    pub image_png: &'a [u8],
}

/// An extraction source: a remote multimodal model or the deterministic mock.
/// Implementations must tolerate concurrent calls.
pub trait ExtractorBackend: Sync {
    /// Stable identifier recorded with every extraction and hashed into
    /// cache keys.
    fn id(&self) -> String;

    /// Produces the raw model response text for one chart image.
    fn fetch(&self, request: &ExtractionRequest<'_>) -> Result<String>;
}

/// Full provenance of one extraction call. Exactly one of `parsed` /
/// `parse_error` is present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionRecord {
    pub chart_id: String,
    pub method: String,
    pub raw_response: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parsed: Option<ExtractionResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parse_error: Option<String>,
    pub latency_ms: u64,
    pub backend_id: String,
}

impl ExtractionRecord {
    pub fn validate(&self) -> Result<()> {
        if self.parsed.is_some() == self.parse_error.is_some() {
            return Err(Error::InvalidData(format!(
                "record {}/{}: exactly one of parsed / parse_error must be present",
                self.chart_id, self.method
            )));
        }
        Ok(())
    }
}

/// Runs one extraction through the cache: a hit replays the stored record
/// verbatim with no backend call; a miss calls the backend, parses the raw
/// response, persists the record, then returns it.
///
/// Transient backend failures are folded into the returned record (the run
/// continues with other charts) and are never cached, so a later run retries
/// them. Fatal configuration errors propagate.
pub fn run_extraction(
    backend: &dyn ExtractorBackend,
    cache: Option<&Cache>,
    method: &str,
    request: &ExtractionRequest<'_>,
) -> Result<ExtractionRecord> {
    let backend_id = backend.id();
    let key = cache_key(request.chart_id, method, request.prompt, request.image_png, &backend_id);
    if let Some(cache) = cache {
        if let Some(record) = cache.get(&key)? {
            return Ok(record);
        }
    }

    let started = Instant::now();
    let outcome = backend.fetch(request);
    let latency_ms = started.elapsed().as_millis() as u64;

    let record = match outcome {
        Ok(raw) => {
            let (parsed, parse_error) = match parse_extraction(&raw) {
                Ok(result) => (Some(result), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let record = ExtractionRecord {
                chart_id: request.chart_id.to_string(),
                method: method.to_string(),
                raw_response: raw,
                parsed,
                parse_error,
                latency_ms,
                backend_id,
            };
            if let Some(cache) = cache {
                cache.put(&key, &record)?;
            }
            record
        }
        Err(Error::Backend(message)) => ExtractionRecord {
            chart_id: request.chart_id.to_string(),
            method: method.to_string(),
            raw_response: String::new(),
            parsed: None,
            parse_error: Some(format!("backend error: {message}")),
            latency_ms,
            backend_id,
        },
        Err(fatal) => return Err(fatal),
    };
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    struct CountingBackend {
        calls: AtomicUsize,
        response: String,
    }

    impl ExtractorBackend for CountingBackend {
        fn id(&self) -> String {
            "counting".into()
        }

        fn fetch(&self, _request: &ExtractionRequest<'_>) -> Result<String> {
            self.calls.fetch_add(1, Ordering::SeqCst);
            Ok(self.response.clone())
        }
    }

    fn request<'a>(png: &'a [u8]) -> ExtractionRequest<'a> {
        ExtractionRequest { chart_id: "chart-00", prompt: "p", image_png: png }
    }

    #[test]
    fn cache_hit_skips_backend() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        let backend = CountingBackend {
            calls: AtomicUsize::new(0),
            response: r#"{"label":"t","series":[{"name":"a","points":[[1,2]]}]}"#.into(),
        };
        let png = [1u8, 2, 3];
        let first = run_extraction(&backend, Some(&cache), "baseline", &request(&png)).unwrap();
        let second = run_extraction(&backend, Some(&cache), "baseline", &request(&png)).unwrap();
        assert_eq!(backend.calls.load(Ordering::SeqCst), 1);
        assert_eq!(first, second);
        assert!(first.parsed.is_some());
        first.validate().unwrap();
    }

    #[test]
    fn prose_response_yields_parse_error_record() {
        let backend =
            CountingBackend { calls: AtomicUsize::new(0), response: "I cannot see the chart".into() };
        let record = run_extraction(&backend, None, "baseline", &request(&[0u8])).unwrap();
        assert!(record.parsed.is_none());
        assert!(record.parse_error.is_some());
        record.validate().unwrap();
    }

    #[test]
    fn transient_backend_failure_is_recorded_not_fatal() {
        struct Failing;
        impl ExtractorBackend for Failing {
            fn id(&self) -> String {
                "failing".into()
            }
            fn fetch(&self, _: &ExtractionRequest<'_>) -> Result<String> {
                Err(Error::Backend("connection reset".into()))
            }
        }
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        let record = run_extraction(&Failing, Some(&cache), "m", &request(&[9u8])).unwrap();
        assert!(record.parse_error.as_deref().unwrap().contains("backend error"));
        // failures are not cached, so a retry hits the backend again
        let key = cache_key("chart-00", "m", "p", &[9u8], "failing");
        assert!(cache.get(&key).unwrap().is_none());
    }

    #[test]
    fn fatal_errors_propagate() {
        struct Fatal;
        impl ExtractorBackend for Fatal {
            fn id(&self) -> String {
                "fatal".into()
            }
            fn fetch(&self, _: &ExtractionRequest<'_>) -> Result<String> {
                Err(Error::BackendFatal("bad credentials".into()))
            }
        }
        let err = run_extraction(&Fatal, None, "m", &request(&[0u8])).unwrap_err();
        assert!(matches!(err, Error::BackendFatal(_)));
    }
}
