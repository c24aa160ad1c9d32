//! Content-addressed extraction cache: one JSON file per record under
//! `<dir>/<key>.json`. With a warmed cache an entire experiment replays with
//! zero backend calls and byte-identical records.

use std::path::{Path, PathBuf};
use std::sync::Mutex;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::extract::ExtractionRecord;

/// Stable content hash over every input that can change a model response.
/// Fields are length-prefixed so boundary shifts cannot collide.
pub fn cache_key(
    chart_id: &str,
    method: &str,
    prompt: &str,
    image_png: &[u8],
    backend_id: &str,
) -> String {
    let mut hasher = Sha256::new();
    for field in [chart_id.as_bytes(), method.as_bytes(), prompt.as_bytes(), image_png, backend_id.as_bytes()]
    {
        hasher.update((field.len() as u64).to_le_bytes());
        hasher.update(field);
    }
    hex::encode(hasher.finalize())
}

/// Filesystem-backed record store. Writes are serialized through an internal
/// lock (single-writer contract); reads of distinct keys are free.
pub struct Cache {
    dir: PathBuf,
    write_lock: Mutex<()>,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Self { dir, write_lock: Mutex::new(()) })
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn get(&self, key: &str) -> Result<Option<ExtractionRecord>> {
        let path = self.path_for(key);
        let text = match std::fs::read_to_string(&path) {
            Ok(text) => text,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let record: ExtractionRecord = serde_json::from_str(&text)
            .map_err(|e| Error::ParseFile { path, message: e.to_string() })?;
        record.validate()?;
        Ok(Some(record))
    }

    pub fn put(&self, key: &str, record: &ExtractionRecord) -> Result<()> {
        record.validate()?;
        let bytes = serde_json::to_vec_pretty(record)
            .map_err(|e| Error::InvalidData(format!("record serialize: {e}")))?;
        let _guard = self.write_lock.lock().expect("cache lock poisoned");
        std::fs::write(self.path_for(key), bytes)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_is_stable_and_input_sensitive() {
        let base = cache_key("c", "m", "p", &[1, 2, 3], "b");
        assert_eq!(base, cache_key("c", "m", "p", &[1, 2, 3], "b"));
        assert_ne!(base, cache_key("c", "m", "p", &[1, 2, 4], "b"));
        assert_ne!(base, cache_key("c", "m", "q", &[1, 2, 3], "b"));
        assert_ne!(base, cache_key("c2", "m", "p", &[1, 2, 3], "b"));
        assert_ne!(base, cache_key("c", "m2", "p", &[1, 2, 3], "b"));
        assert_ne!(base, cache_key("c", "m", "p", &[1, 2, 3], "b2"));
    }

    #[test]
    fn key_is_filesystem_safe_hex() {
        let key = cache_key("chart/../00", "m", "p", &[], "b");
        assert_eq!(key.len(), 64);
        assert!(key.chars().all(|c| c.is_ascii_hexdigit()));
    }

    #[test]
    fn field_boundaries_matter() {
        // ("ab", "c") must not collide with ("a", "bc")
        assert_ne!(cache_key("ab", "c", "", &[], ""), cache_key("a", "bc", "", &[], ""));
    }

    #[test]
    fn get_put_roundtrip_and_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        assert!(cache.get("0".repeat(64).as_str()).unwrap().is_none());
        let record = ExtractionRecord {
            chart_id: "c".into(),
            method: "m".into(),
            raw_response: "raw".into(),
            parsed: None,
            parse_error: Some("nope".into()),
            latency_ms: 3,
            backend_id: "b".into(),
        };
        let key = cache_key("c", "m", "p", &[], "b");
        cache.put(&key, &record).unwrap();
        assert_eq!(cache.get(&key).unwrap().unwrap(), record);
    }
}
