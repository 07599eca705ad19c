//! Wire types of the `/v1` API. See `docs/api.md` for examples.

use std::path::PathBuf;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use xfer_core::corpus::{CompletionEvent, Language};
use xfer_core::model::ProvenanceEntry;
use xfer_core::ranker::Skipped;

pub const DEFAULT_TOP_K: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompletionRequest {
    pub language: Language,
    /// Source text up to the cursor. A trailing identifier without
    /// following whitespace is treated as the typed prefix.
    pub before_cursor: String,
    /// Explicit suggestion list; derived from the text and the corpus pool
    /// when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<String>>,
    #[serde(default)]
    pub session_id: String,
    #[serde(default)]
    pub developer_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top_k: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoredSuggestion {
    pub candidate: String,
    pub score: f64,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompletionResponse {
    pub request_id: String,
    pub suggestions: Vec<ScoredSuggestion>,
    /// Candidates that could not be scored (not identifiers, duplicates).
    pub skipped: Vec<Skipped>,
    /// Size of the full suggestion list that was ranked.
    pub candidates: usize,
    /// Typed prefix that filtered the list, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefix: Option<String>,
    pub context_hash: String,
    /// Time spent encoding and scoring, in milliseconds.
    pub latency_ms: f64,
    pub model: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceNotice {
    pub request_id: String,
    #[serde(default)]
    pub session_id: String,
    pub accepted: String,
    /// Echo of the suggestions the client displayed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shown: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context_hash: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<DateTime<Utc>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcceptResponse {
    pub event_id: String,
    /// False when this acceptance had already been logged.
    pub logged: bool,
    pub event: CompletionEvent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReloadRequest {
    pub path: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelInfo {
    /// Hash prefix of the checkpoint bytes.
    pub fingerprint: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    pub vocab_size: usize,
    pub context_len: usize,
    pub provenance: Vec<ProvenanceEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Health {
    /// `ok`, or `no_model` before a checkpoint is loaded.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelInfo>,
    pub events_logged: u64,
    pub pending_requests: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
}
