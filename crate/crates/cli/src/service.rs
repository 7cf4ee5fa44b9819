//! JSON-over-HTTP service holding named theory sessions.

use std::collections::HashMap;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use axum::body::Bytes;
use axum::extract::rejection::BytesRejection;
use axum::extract::{DefaultBodyLimit, Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use phax_core::af::Semantics;
use phax_core::pipeline::Analysis;
use phax_core::theory::serialize_theory;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::api::{self, ApiError, ApiResult};

/// Largest accepted request body.
pub const MAX_BODY: usize = 1 << 20;

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

pub struct Session {
    pub id: String,
    pub created_at: u64,
    /// Bumped on every committed change.
    pub version: u64,
    pub analysis: Analysis,
}

#[derive(Debug, Serialize, Deserialize)]
struct SessionMeta {
    id: String,
    created_at: u64,
    version: u64,
}

#[derive(Clone, Default)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<String, Arc<RwLock<Session>>>>>,
    state_dir: Option<PathBuf>,
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl AppState {
    pub fn new() -> Self {
        AppState::default()
    }

    /// State persisted under `dir`, loading whatever snapshots are there.
    pub fn with_state_dir(dir: &Path) -> io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        let state = AppState {
            sessions: Arc::default(),
            state_dir: Some(dir.to_path_buf()),
        };
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "json") {
                state.restore(&path)?;
            }
        }
        Ok(state)
    }

    fn restore(&self, meta_path: &Path) -> io::Result<()> {
        let invalid = |e: String| io::Error::new(io::ErrorKind::InvalidData, format!("{}: {e}", meta_path.display()));
        let meta: SessionMeta =
            serde_json::from_str(&std::fs::read_to_string(meta_path)?).map_err(|e| invalid(e.to_string()))?;
        let source = std::fs::read_to_string(meta_path.with_extension("phax"))?;
        let theory = api::load_theory(&source).map_err(|e| invalid(e.to_string()))?;
        let analysis = Analysis::new(&theory).map_err(|e| invalid(e.to_string()))?;
        let session = Session {
            id: meta.id.clone(),
            created_at: meta.created_at,
            version: meta.version,
            analysis,
        };
        self.sessions.write().unwrap().insert(meta.id, Arc::new(RwLock::new(session)));
        Ok(())
    }

    fn persist(&self, s: &Session) -> ApiResult<()> {
        let Some(dir) = &self.state_dir else {
            return Ok(());
        };
        let meta = SessionMeta {
            id: s.id.clone(),
            created_at: s.created_at,
            version: s.version,
        };
        let fail = |e: io::Error| ApiError::new(500, "STORAGE", e.to_string());
        std::fs::write(dir.join(format!("{}.phax", s.id)), serialize_theory(&s.analysis.theory)).map_err(fail)?;
        let json = serde_json::to_string_pretty(&meta).expect("meta serializes");
        std::fs::write(dir.join(format!("{}.json", s.id)), json).map_err(fail)
    }

    pub fn session_count(&self) -> usize {
        self.sessions.read().unwrap().len()
    }

    fn session(&self, id: &str) -> ApiResult<Arc<RwLock<Session>>> {
        self.sessions
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::unknown_session(id))
    }

    pub fn create(&self, source: &str) -> ApiResult<String> {
        let analysis = Analysis::new(&api::load_theory(source)?)?;
        let id = uuid::Uuid::new_v4().simple().to_string();
        let session = Session {
            id: id.clone(),
            created_at: now(),
            version: 1,
            analysis,
        };
        self.persist(&session)?;
        self.sessions.write().unwrap().insert(id.clone(), Arc::new(RwLock::new(session)));
        Ok(id)
    }

    fn read<T>(&self, id: &str, f: impl FnOnce(&Session) -> ApiResult<T>) -> ApiResult<T> {
        let s = self.session(id)?;
        let guard = s.read().unwrap();
        f(&guard)
    }

    /// Runs `f` under the session's write lock; a returned analysis is
    /// stored when `commit` says so.
    fn update<T>(&self, id: &str, f: impl FnOnce(&Analysis) -> ApiResult<(Analysis, T, bool)>) -> ApiResult<T> {
        let s = self.session(id)?;
        let mut guard = s.write().unwrap();
        let (next, out, commit) = f(&guard.analysis)?;
        if commit {
            guard.analysis = next;
            guard.version += 1;
            self.persist(&guard)?;
        }
        Ok(out)
    }
}

fn body_text(body: Result<Bytes, BytesRejection>) -> ApiResult<String> {
    let bytes = body.map_err(|e| {
        let status = e.status();
        if status == StatusCode::PAYLOAD_TOO_LARGE {
            ApiError::new(413, "PAYLOAD_TOO_LARGE", format!("request body exceeds {MAX_BODY} bytes"))
        } else {
            ApiError::new(status.as_u16(), "BAD_REQUEST", e.body_text())
        }
    })?;
    String::from_utf8(bytes.to_vec()).map_err(|_| ApiError::bad_request("request body is not UTF-8"))
}

fn body_json<T: DeserializeOwned>(body: Result<Bytes, BytesRejection>) -> ApiResult<T> {
    let text = body_text(body)?;
    serde_json::from_str(&text).map_err(|e| ApiError::bad_request(format!("malformed request: {e}")))
}

#[derive(Debug, Serialize)]
struct Created {
    id: String,
    name: String,
    arguments: usize,
}

#[derive(Deserialize)]
struct SourceBody {
    source: String,
}

/// Body is the theory text, or `{"source": "..."}`.
async fn create_theory(State(st): State<AppState>, body: Result<Bytes, BytesRejection>) -> ApiResult<Response> {
    let text = body_text(body)?;
    let source = match serde_json::from_str::<SourceBody>(&text) {
        Ok(b) => b.source,
        Err(_) => text,
    };
    let id = st.create(&source)?;
    let created = st.read(&id, |s| {
        Ok(Created {
            id: id.clone(),
            name: s.analysis.theory.name.clone(),
            arguments: s.analysis.defeats.arguments.len(),
        })
    })?;
    Ok((StatusCode::CREATED, Json(created)).into_response())
}

async fn get_arguments(State(st): State<AppState>, UrlPath(id): UrlPath<String>) -> ApiResult<Json<api::ArgumentsView>> {
    st.read(&id, |s| Ok(Json(api::arguments_view(&s.analysis))))
}

fn semantics_param(q: &HashMap<String, String>) -> ApiResult<Semantics> {
    match q.get("semantics") {
        None => Ok(Semantics::Grounded),
        Some(s) => s.parse().map_err(ApiError::bad_request),
    }
}

async fn get_extensions(
    State(st): State<AppState>,
    UrlPath(id): UrlPath<String>,
    Query(q): Query<HashMap<String, String>>,
) -> ApiResult<Json<api::ExtensionsView>> {
    let semantics = semantics_param(&q)?;
    st.read(&id, |s| Ok(Json(api::extensions_view(&s.analysis, semantics)?)))
}

async fn post_explain(
    State(st): State<AppState>,
    UrlPath(id): UrlPath<String>,
    body: Result<Bytes, BytesRejection>,
) -> ApiResult<Json<api::ExplainResponse>> {
    let session = st.session(&id)?;
    let req: api::ExplainRequest = body_json(body)?;
    let guard = session.read().unwrap();
    Ok(Json(api::explain(&guard.analysis, &req)?))
}

async fn post_challenge(
    State(st): State<AppState>,
    UrlPath(id): UrlPath<String>,
    body: Result<Bytes, BytesRejection>,
) -> ApiResult<Json<api::ChallengeResponse>> {
    st.session(&id)?;
    let req: api::ChallengeRequest = body_json(body)?;
    st.update(&id, |an| {
        let (next, resp) = api::challenge(an, &req)?;
        Ok((next, Json(resp), req.commit))
    })
}

async fn post_whatif(
    State(st): State<AppState>,
    UrlPath(id): UrlPath<String>,
    body: Result<Bytes, BytesRejection>,
) -> ApiResult<Json<api::WhatIfResponse>> {
    st.session(&id)?;
    let req: api::WhatIfRequest = body_json(body)?;
    st.update(&id, |an| {
        let (next, resp) = api::whatif(an, &req)?;
        Ok((next, Json(resp), req.commit))
    })
}

async fn get_schemes() -> Json<Vec<api::SchemeView>> {
    Json(api::schemes_view())
}

async fn not_found() -> ApiError {
    ApiError::new(404, "NOT_FOUND", "no such endpoint")
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/theory", post(create_theory))
        .route("/api/theory/{id}/arguments", get(get_arguments))
        .route("/api/theory/{id}/extensions", get(get_extensions))
        .route("/api/theory/{id}/explain", post(post_explain))
        .route("/api/theory/{id}/challenge", post(post_challenge))
        .route("/api/theory/{id}/whatif", post(post_whatif))
        .route("/api/schemes", get(get_schemes))
        .fallback(not_found)
        .layer(DefaultBodyLimit::max(MAX_BODY))
        .with_state(state)
}

/// Serves until ctrl-c.
pub async fn serve(addr: std::net::SocketAddr, state: AppState) -> io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
