//! Record/replay store: an append-only JSONL file of
//! `{fingerprint, request, text, timestamp}` objects.
//!
//! Record mode wraps any backend and persists every completion keyed by
//! the request fingerprint; replay mode serves exclusively from the store.
//! Because fingerprints include the per-agent sequence counter, replaying
//! a recorded run re-issues the same fingerprints in the same order and
//! must never miss.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::{BackendError, GenerationRequest, GenerationResult, TextBackend};

#[derive(Debug, Serialize, Deserialize)]
struct StoreLine {
    fingerprint: String,
    request: GenerationRequest,
    text: String,
    timestamp: u64,
}

/// In-memory view of a replay store file.
#[derive(Debug)]
pub struct ReplayStore {
    entries: HashMap<String, String>,
}

impl ReplayStore {
    /// Loads and validates a store. Every line must parse and its
    /// fingerprint must match the embedded request; conflicting duplicate
    /// fingerprints are corruption.
    pub fn load(path: &Path) -> Result<Self, BackendError> {
        let file = File::open(path).map_err(|e| {
            BackendError::StoreCorrupt(format!("cannot open {}: {e}", path.display()))
        })?;
        let reader = BufReader::new(file);
        let mut entries = HashMap::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| {
                BackendError::StoreCorrupt(format!("read error at line {}: {e}", idx + 1))
            })?;
            if line.trim().is_empty() {
                continue;
            }
            let parsed: StoreLine = serde_json::from_str(&line).map_err(|e| {
                BackendError::StoreCorrupt(format!("bad JSON at line {}: {e}", idx + 1))
            })?;
            if parsed.request.fingerprint() != parsed.fingerprint {
                return Err(BackendError::StoreCorrupt(format!(
                    "fingerprint mismatch at line {}",
                    idx + 1
                )));
            }
            if let Some(existing) = entries.get(&parsed.fingerprint) {
                if existing != &parsed.text {
                    return Err(BackendError::StoreCorrupt(format!(
                        "conflicting duplicate fingerprint at line {}",
                        idx + 1
                    )));
                }
            }
            entries.insert(parsed.fingerprint, parsed.text);
        }
        Ok(ReplayStore { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, fingerprint: &str) -> Option<&str> {
        self.entries.get(fingerprint).map(String::as_str)
    }
}

/// Serves completions from a loaded store; unknown fingerprints miss.
pub struct ReplayBackend {
    store: ReplayStore,
    backend_id: String,
}

impl ReplayBackend {
    pub fn new(store: ReplayStore) -> Self {
        ReplayBackend {
            store,
            backend_id: "replay".to_string(),
        }
    }

    pub fn open(path: &Path) -> Result<Self, BackendError> {
        Ok(Self::new(ReplayStore::load(path)?))
    }
}

impl TextBackend for ReplayBackend {
    fn generate(&self, request: &GenerationRequest) -> Result<GenerationResult, BackendError> {
        let fingerprint = request.fingerprint();
        let text = self
            .store
            .get(&fingerprint)
            .ok_or(BackendError::ScriptMiss {
                fingerprint: fingerprint.clone(),
            })?;
        Ok(GenerationResult {
            text: text.to_string(),
            backend_id: self.backend_id.clone(),
            latency_ms: 0,
            raw_fingerprint: fingerprint,
        })
    }

    fn backend_id(&self) -> &str {
        &self.backend_id
    }
}

/// Wraps another backend and appends every completion to the store file.
/// Writes are serialized behind a single-writer lock and flushed per line.
pub struct RecordBackend {
    inner: Box<dyn TextBackend>,
    writer: Mutex<BufWriter<File>>,
    path: PathBuf,
    backend_id: String,
}

impl RecordBackend {
    pub fn create(path: &Path, inner: Box<dyn TextBackend>) -> Result<Self, BackendError> {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| {
                BackendError::BackendUnavailable(format!(
                    "cannot create record store directory: {e}"
                ))
            })?;
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| {
                BackendError::BackendUnavailable(format!(
                    "cannot open record store {}: {e}",
                    path.display()
                ))
            })?;
        let backend_id = format!("record+{}", inner.backend_id());
        Ok(RecordBackend {
            inner,
            writer: Mutex::new(BufWriter::new(file)),
            path: path.to_path_buf(),
            backend_id,
        })
    }

    pub fn store_path(&self) -> &Path {
        &self.path
    }
}

impl TextBackend for RecordBackend {
    fn generate(&self, request: &GenerationRequest) -> Result<GenerationResult, BackendError> {
        let result = self.inner.generate(request)?;
        let line = StoreLine {
            fingerprint: result.raw_fingerprint.clone(),
            request: request.clone(),
            text: result.text.clone(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let serialized = serde_json::to_string(&line)
            .map_err(|e| BackendError::BackendUnavailable(format!("record store encoding: {e}")))?;
        let mut writer = self.writer.lock().expect("record store writer poisoned");
        writeln!(writer, "{serialized}")
            .and_then(|_| writer.flush())
            .map_err(|e| BackendError::BackendUnavailable(format!("record store write: {e}")))?;
        Ok(result)
    }

    fn backend_id(&self) -> &str {
        &self.backend_id
    }
}
