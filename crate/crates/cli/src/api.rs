//! HTTP JSON API over the session store.
//!
//! Each session sits behind its own mutex, so its events are strictly
//! ordered while distinct sessions proceed independently. Proof search runs on
//! the blocking pool.

use std::collections::HashMap;
use std::io;
use std::path::Path;
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;

use clarena_core::prover::{Decision, ProofNode};

use crate::journal::{Event, Journal};
use crate::session::{Session, SessionError, SessionSpec, SessionState};
use crate::{decide_text, SystemName};

#[derive(Debug)]
pub enum ApiError {
    Session(SessionError),
    NotFound(String),
    BadRequest(String),
    Internal(String),
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        ApiError::Session(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, body) = match self {
            ApiError::Session(e @ SessionError::IllegalMove { .. }) => {
                let SessionError::IllegalMove { ref legal_moves, .. } = e else { unreachable!() };
                (StatusCode::BAD_REQUEST, json!({ "error": e.to_string(), "legalMoves": legal_moves }))
            }
            ApiError::Session(e @ SessionError::BadRequest(_)) => {
                (StatusCode::BAD_REQUEST, json!({ "error": e.to_string() }))
            }
            ApiError::Session(e @ SessionError::Finished) => (StatusCode::CONFLICT, json!({ "error": e.to_string() })),
            ApiError::Session(e @ SessionError::Engine(_)) => {
                (StatusCode::INTERNAL_SERVER_ERROR, json!({ "error": e.to_string() }))
            }
            ApiError::NotFound(id) => (StatusCode::NOT_FOUND, json!({ "error": format!("no session {id}") })),
            ApiError::BadRequest(m) => (StatusCode::BAD_REQUEST, json!({ "error": m })),
            ApiError::Internal(m) => (StatusCode::INTERNAL_SERVER_ERROR, json!({ "error": m })),
        };
        (status, Json(body)).into_response()
    }
}

type Shared = Arc<Mutex<Session>>;

#[derive(Default)]
pub struct AppState {
    sessions: RwLock<HashMap<String, Shared>>,
    journal: Option<Journal>,
}

impl AppState {
    pub fn new() -> AppState {
        AppState::default()
    }

    /// A store that logs to `path`, first replaying whatever the file holds.
    pub fn with_journal(path: &Path) -> io::Result<AppState> {
        let (journal, events) = Journal::open(path)?;
        let state = AppState { sessions: RwLock::default(), journal: None };
        for event in events {
            // a record that no longer applies is skipped, as it was when first written
            let _ = state.apply(&event);
        }
        Ok(AppState { journal: Some(journal), ..state })
    }

    fn apply(&self, event: &Event) -> Result<(), ApiError> {
        match event {
            Event::Create { id, spec } => {
                let s = Session::create(id.clone(), spec)?;
                self.sessions.write().unwrap().insert(id.clone(), Arc::new(Mutex::new(s)));
            }
            Event::Move { id, mv } => self.session(id)?.lock().unwrap().apply_human(mv)?,
            Event::End { id } => self.session(id)?.lock().unwrap().finish(),
            Event::Delete { id } => {
                self.sessions.write().unwrap().remove(id);
            }
        }
        Ok(())
    }

    fn log(&self, event: &Event) -> Result<(), ApiError> {
        match &self.journal {
            Some(j) => j.append(event).map_err(|e| ApiError::Internal(format!("journal: {e}"))),
            None => Ok(()),
        }
    }

    fn session(&self, id: &str) -> Result<Shared, ApiError> {
        self.sessions.read().unwrap().get(id).cloned().ok_or_else(|| ApiError::NotFound(id.to_string()))
    }

    pub fn create(&self, spec: SessionSpec) -> Result<SessionState, ApiError> {
        let id = uuid::Uuid::new_v4().to_string();
        let s = Session::create(id.clone(), &spec)?;
        let state = s.state();
        self.log(&Event::Create { id: id.clone(), spec })?;
        self.sessions.write().unwrap().insert(id, Arc::new(Mutex::new(s)));
        Ok(state)
    }

    pub fn state(&self, id: &str) -> Result<SessionState, ApiError> {
        Ok(self.session(id)?.lock().unwrap().state())
    }

    pub fn human_move(&self, id: &str, mv: &str) -> Result<SessionState, ApiError> {
        let shared = self.session(id)?;
        let mut s = shared.lock().unwrap();
        s.apply_human(mv)?;
        self.log(&Event::Move { id: id.to_string(), mv: mv.to_string() })?;
        Ok(s.state())
    }

    pub fn end(&self, id: &str) -> Result<SessionState, ApiError> {
        let shared = self.session(id)?;
        let mut s = shared.lock().unwrap();
        s.finish();
        self.log(&Event::End { id: id.to_string() })?;
        Ok(s.state())
    }

    pub fn delete(&self, id: &str) -> Result<(), ApiError> {
        let removed = self.sessions.write().unwrap().remove(id);
        if removed.is_none() {
            return Err(ApiError::NotFound(id.to_string()));
        }
        self.log(&Event::Delete { id: id.to_string() })
    }
}

#[derive(Debug, Deserialize)]
pub struct DecideRequest {
    pub formula: String,
    #[serde(default)]
    pub system: Option<SystemName>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DecideResponse {
    pub provable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proof: Option<ProofNode>,
}

#[derive(Debug, Deserialize)]
pub struct MoveRequest {
    #[serde(rename = "move")]
    pub mv: String,
}

#[derive(Debug, Serialize)]
pub struct Created {
    pub id: String,
    pub state: SessionState,
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError::Internal(e.to_string()))?
}

async fn decide_handler(Json(req): Json<DecideRequest>) -> Result<Json<DecideResponse>, ApiError> {
    let system = req.system.unwrap_or_default();
    let decision = blocking(move || decide_text(&req.formula, system).map_err(ApiError::BadRequest)).await?;
    Ok(Json(match decision {
        Decision::Provable(p) => DecideResponse { provable: true, proof: Some(p) },
        Decision::Unprovable => DecideResponse { provable: false, proof: None },
    }))
}

async fn create_handler(
    State(app): State<Arc<AppState>>,
    Json(spec): Json<SessionSpec>,
) -> Result<(StatusCode, Json<Created>), ApiError> {
    let state = blocking(move || app.create(spec)).await?;
    Ok((StatusCode::CREATED, Json(Created { id: state.id.clone(), state })))
}

async fn get_handler(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
) -> Result<Json<SessionState>, ApiError> {
    app.state(&id).map(Json)
}

async fn move_handler(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    Json(req): Json<MoveRequest>,
) -> Result<Json<SessionState>, ApiError> {
    app.human_move(&id, &req.mv).map(Json)
}

async fn end_handler(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
) -> Result<Json<SessionState>, ApiError> {
    app.end(&id).map(Json)
}

async fn delete_handler(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Result<StatusCode, ApiError> {
    app.delete(&id).map(|_| StatusCode::NO_CONTENT)
}

pub fn router(app: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/decide", post(decide_handler))
        .route("/api/sessions", post(create_handler))
        .route("/api/sessions/{id}", get(get_handler).delete(delete_handler))
        .route("/api/sessions/{id}/moves", post(move_handler))
        .route("/api/sessions/{id}/end", post(end_handler))
        .with_state(app)
}

/// Serves the API on `port` of every interface until the process stops.
pub async fn serve(port: u16, app: Arc<AppState>) -> io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(app)).await
}
