//! Local HTTP completion service.
//!
//! Requests are ranked against an immutable model snapshot that can be
//! swapped atomically with `/v1/reload`; accepted suggestions are appended
//! to a JSONL event log in the same format the trainer fine-tunes on.

pub mod api;
mod event_log;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant};

use axum::extract::{Json, State};
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use chrono::Utc;
use sha2::{Digest, Sha256};
use xfer_core::corpus::{
    classify, context_tokens, derive_candidates, lex, CompletionEvent, EventPolicy, FrequencyTable, Language, TokenKind,
};
use xfer_core::model::{Gpt, ModelCheckpoint, ProvenanceEntry};
use xfer_core::ranker::{rank, top_k};
use xfer_core::seed::stable_hash;
use xfer_core::tokenizer::Vocabulary;

pub use api::*;
pub use event_log::EventLog;

pub const DEFAULT_PORT: u16 = 8731;
/// How long a completion stays acceptable.
pub const REQUEST_TTL: Duration = Duration::from_secs(600);
const MAX_PENDING: usize = 10_000;

static INDEX_HTML: &str = include_str!("../static/index.html");

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error("{0}")]
    BadRequest(String),
    #[error("unknown or expired request id {0:?}")]
    UnknownRequest(String),
    #[error("{0}")]
    Rejected(String),
    #[error("no model loaded")]
    NoModel,
    #[error(transparent)]
    Core(#[from] xfer_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("background task failed: {0}")]
    Join(String),
}

impl ServiceError {
    pub fn status(&self) -> StatusCode {
        match self {
            ServiceError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ServiceError::UnknownRequest(_) => StatusCode::NOT_FOUND,
            ServiceError::Rejected(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::NoModel => StatusCode::SERVICE_UNAVAILABLE,
            ServiceError::Core(xfer_core::Error::Undecodable { .. } | xfer_core::Error::EmptyIdentifier) => StatusCode::BAD_REQUEST,
            ServiceError::Core(_) | ServiceError::Json(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::Io(_) | ServiceError::Join(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = self.status();
        (status, Json(ErrorBody { error: self.to_string() })).into_response()
    }
}

/// A loaded checkpoint. Never mutated; replaced wholesale on reload.
#[derive(Debug)]
pub struct Snapshot {
    pub model: Gpt<f32>,
    pub vocab: Vocabulary,
    pub provenance: Vec<ProvenanceEntry>,
    pub fingerprint: String,
    pub path: Option<PathBuf>,
    /// Corpus-frequent identifiers used to derive suggestion lists.
    pub pool: FrequencyTable,
}

impl Snapshot {
    pub fn from_checkpoint(ckpt: ModelCheckpoint, bytes: &[u8], path: Option<PathBuf>) -> Self {
        let digest = Sha256::digest(bytes);
        let fingerprint = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
        let mut pool = FrequencyTable::default();
        for lang in Language::ALL {
            for (entry, count) in ckpt.vocab.entries() {
                if classify(entry, lang) == TokenKind::Identifier && !entry.starts_with('<') {
                    pool.add(lang, entry, *count);
                }
            }
        }
        let provenance = ckpt.provenance.clone();
        let (model, vocab) = ckpt.into_model();
        Snapshot {
            model,
            vocab,
            provenance,
            fingerprint,
            path,
            pool,
        }
    }

    pub fn load(path: &Path) -> Result<Self, ServiceError> {
        let bytes = std::fs::read(path)?;
        let ckpt = ModelCheckpoint::from_bytes(&bytes)?;
        Ok(Self::from_checkpoint(ckpt, &bytes, Some(path.to_path_buf())))
    }

    pub fn info(&self) -> ModelInfo {
        ModelInfo {
            fingerprint: self.fingerprint.clone(),
            path: self.path.clone(),
            vocab_size: self.vocab.len(),
            context_len: self.model.config.context_len,
            provenance: self.provenance.clone(),
        }
    }
}

#[derive(Clone, Debug)]
struct Pending {
    language: Language,
    context: Vec<String>,
    candidates: Vec<String>,
    shown: Vec<String>,
    session_id: String,
    developer_id: String,
    context_hash: String,
    created: Instant,
}

pub struct AppState {
    snapshot: RwLock<Option<Arc<Snapshot>>>,
    log: Mutex<EventLog>,
    pending: Mutex<HashMap<String, Pending>>,
    /// (request id, index in shown) → logged event id.
    accepted: Mutex<HashMap<(String, usize), CompletionEvent>>,
    next_id: AtomicU64,
    boot: u64,
}

impl AppState {
    pub fn new(snapshot: Option<Snapshot>, log: EventLog) -> Self {
        let boot = stable_hash(
            std::process::id() as u64,
            &Utc::now().timestamp_nanos_opt().unwrap_or_default().to_string(),
        );
        AppState {
            snapshot: RwLock::new(snapshot.map(Arc::new)),
            log: Mutex::new(log),
            pending: Mutex::new(HashMap::new()),
            accepted: Mutex::new(HashMap::new()),
            next_id: AtomicU64::new(1),
            boot,
        }
    }

    /// The snapshot new requests are served from.
    pub fn current(&self) -> Option<Arc<Snapshot>> {
        self.snapshot.read().expect("snapshot lock").clone()
    }

    /// Atomically replaces the model; requests already holding the old
    /// snapshot finish on it.
    pub fn swap(&self, snapshot: Snapshot) {
        *self.snapshot.write().expect("snapshot lock") = Some(Arc::new(snapshot));
    }

    pub fn events_logged(&self) -> u64 {
        self.log.lock().expect("log lock").len()
    }

    pub fn complete(&self, req: &CompletionRequest) -> Result<CompletionResponse, ServiceError> {
        let snap = self.current().ok_or(ServiceError::NoModel)?;
        if req.before_cursor.trim().is_empty() {
            return Err(ServiceError::BadRequest("before_cursor is empty".into()));
        }
        let stream = lex(&req.before_cursor, req.language)?;
        let mut tokens = stream.tokens;
        let ends_in_word = req
            .before_cursor
            .chars()
            .last()
            .is_some_and(|c| c.is_alphanumeric() || c == '_');
        let prefix = match tokens.last() {
            Some(t) if ends_in_word && t.is_identifier() => Some(tokens.pop().expect("last").text),
            _ => None,
        };
        let context = context_tokens(&tokens);
        if context.is_empty() {
            return Err(ServiceError::BadRequest("no context before the cursor".into()));
        }
        let context_hash = format!("{:016x}", stable_hash(0, &format!("{}\u{1}{}", req.language, context.join("\u{0}"))));
        let mut candidates = match &req.candidates {
            Some(list) => {
                let mut seen = std::collections::HashSet::new();
                list.iter().filter(|c| seen.insert(c.as_str())).cloned().collect::<Vec<_>>()
            }
            None => {
                let policy = EventPolicy::for_language(req.language);
                derive_candidates(
                    &tokens,
                    &snap.pool,
                    req.language,
                    policy.candidate_mean.round() as usize,
                    policy.same_file_share,
                    stable_hash(0, &context_hash),
                )
            }
        };
        if let Some(p) = &prefix {
            let matching: Vec<String> = candidates.iter().filter(|c| c.starts_with(p.as_str())).cloned().collect();
            if !matching.is_empty() {
                candidates = matching;
            }
        }
        if candidates.is_empty() {
            return Err(ServiceError::BadRequest("suggestion list is empty".into()));
        }

        let started = Instant::now();
        let ranked = rank(&snap.model, &snap.vocab, req.language, &context, &candidates)?;
        let latency_ms = started.elapsed().as_secs_f64() * 1e3;

        let k = req.top_k.unwrap_or(DEFAULT_TOP_K).max(1);
        let suggestions: Vec<ScoredSuggestion> = top_k(&ranked, k)
            .iter()
            .map(|s| ScoredSuggestion {
                candidate: s.candidate.clone(),
                score: s.score,
                rank: s.rank,
            })
            .collect();
        let n = self.next_id.fetch_add(1, Ordering::Relaxed);
        let request_id = format!("{:012x}-{n}", self.boot & 0xffff_ffff_ffff);
        let pending = Pending {
            language: req.language,
            context,
            candidates: candidates.clone(),
            shown: suggestions.iter().map(|s| s.candidate.clone()).collect(),
            session_id: req.session_id.clone(),
            developer_id: req.developer_id.clone(),
            context_hash: context_hash.clone(),
            created: Instant::now(),
        };
        {
            let mut map = self.pending.lock().expect("pending lock");
            if map.len() >= MAX_PENDING {
                map.retain(|_, p| p.created.elapsed() < REQUEST_TTL);
            }
            if map.len() >= MAX_PENDING {
                // still full of live requests: drop the oldest
                if let Some(oldest) = map.iter().min_by_key(|(_, p)| p.created).map(|(k, _)| k.clone()) {
                    map.remove(&oldest);
                }
            }
            map.insert(request_id.clone(), pending);
        }
        Ok(CompletionResponse {
            request_id,
            suggestions,
            skipped: ranked.skipped,
            candidates: candidates.len(),
            prefix,
            context_hash,
            latency_ms,
            model: snap.fingerprint.clone(),
        })
    }

    pub fn accept(&self, notice: &AcceptanceNotice) -> Result<AcceptResponse, ServiceError> {
        let pending = {
            let map = self.pending.lock().expect("pending lock");
            map.get(&notice.request_id)
                .filter(|p| p.created.elapsed() < REQUEST_TTL)
                .cloned()
                .ok_or_else(|| ServiceError::UnknownRequest(notice.request_id.clone()))?
        };
        if notice.session_id != pending.session_id {
            return Err(ServiceError::Rejected(format!(
                "request {} belongs to another session",
                notice.request_id
            )));
        }
        if let Some(hash) = &notice.context_hash {
            if *hash != pending.context_hash {
                return Err(ServiceError::Rejected("context hash does not match the request".into()));
            }
        }
        if let Some(shown) = &notice.shown {
            if *shown != pending.shown {
                return Err(ServiceError::Rejected("shown list does not match the served suggestions".into()));
            }
        }
        let index = pending
            .shown
            .iter()
            .position(|s| *s == notice.accepted)
            .ok_or_else(|| {
                ServiceError::Rejected(format!(
                    "{:?} was not among the shown suggestions {:?}",
                    notice.accepted, pending.shown
                ))
            })?;
        let key = (notice.request_id.clone(), index);
        let mut accepted = self.accepted.lock().expect("accepted lock");
        if let Some(event) = accepted.get(&key) {
            return Ok(AcceptResponse {
                event_id: event.id.clone(),
                logged: false,
                event: event.clone(),
            });
        }
        let day = notice.timestamp.unwrap_or_else(Utc::now).date_naive();
        let developer_id = if pending.developer_id.is_empty() {
            "anonymous".to_string()
        } else {
            pending.developer_id.clone()
        };
        let event = CompletionEvent {
            id: format!("{}#{}", notice.request_id, index),
            language: pending.language,
            context_tokens: pending.context.clone(),
            candidates: pending.candidates.clone(),
            accepted: notice.accepted.clone(),
            developer_id,
            day,
        };
        self.log.lock().expect("log lock").append(&event)?;
        accepted.insert(key, event.clone());
        Ok(AcceptResponse {
            event_id: event.id.clone(),
            logged: true,
            event,
        })
    }

    /// Loads `path` and swaps it in; on failure the old model keeps serving.
    pub fn reload(&self, path: &Path) -> Result<ModelInfo, ServiceError> {
        let snap = Snapshot::load(path)?;
        let info = snap.info();
        self.swap(snap);
        log::info!("serving model {} from {}", info.fingerprint, path.display());
        Ok(info)
    }

    pub fn health(&self) -> Health {
        let model = self.current().map(|s| s.info());
        Health {
            status: if model.is_some() { "ok" } else { "no_model" }.to_string(),
            model,
            events_logged: self.events_logged(),
            pending_requests: self.pending.lock().expect("pending lock").len(),
        }
    }
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ServiceError> + Send + 'static,
) -> Result<T, ServiceError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ServiceError::Join(e.to_string()))?
}

async fn complete_handler(
    State(state): State<Arc<AppState>>,
    Json(req): Json<CompletionRequest>,
) -> Result<Json<CompletionResponse>, ServiceError> {
    blocking(move || state.complete(&req)).await.map(Json)
}

async fn accept_handler(
    State(state): State<Arc<AppState>>,
    Json(notice): Json<AcceptanceNotice>,
) -> Result<Json<AcceptResponse>, ServiceError> {
    blocking(move || state.accept(&notice)).await.map(Json)
}

async fn reload_handler(
    State(state): State<Arc<AppState>>,
    Json(req): Json<ReloadRequest>,
) -> Result<Json<ModelInfo>, ServiceError> {
    let result = blocking(move || state.reload(&req.path)).await;
    if let Err(e) = &result {
        log::warn!("reload failed, keeping the current model: {e}");
    }
    result.map(Json)
}

async fn health_handler(State(state): State<Arc<AppState>>) -> Json<Health> {
    Json(state.health())
}

async fn index_handler() -> Html<&'static str> {
    Html(INDEX_HTML)
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/", get(index_handler))
        .route("/v1/complete", post(complete_handler))
        .route("/v1/accept", post(accept_handler))
        .route("/v1/reload", post(reload_handler))
        .route("/v1/health", get(health_handler))
        .with_state(state)
}

/// Serves until the process is stopped.
pub async fn serve(state: Arc<AppState>, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}
