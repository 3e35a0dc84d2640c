use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use evaluate::tree::Player;
use serde::{Deserialize, Serialize};
use serde_json::json;
use uuid::Uuid;

use crate::session::{GameSession, Hint, MoveRequest, SessionError, StateView};
use crate::store::SharedSession;
use crate::AppState;

#[derive(Debug)]
pub enum ApiError {
    BadRequest(String),
    NotFound,
    Conflict(String),
    Unprocessable(String),
    Internal(String),
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let msg = e.to_string();
        match e {
            SessionError::Parse(_) | SessionError::TooManyVariables { .. } => ApiError::BadRequest(msg),
            SessionError::Illegal(_) | SessionError::BadMove(_) => ApiError::BadRequest(msg),
            SessionError::Unsolvable => ApiError::Unprocessable(msg),
            SessionError::NotYourTurn | SessionError::Finished => ApiError::Conflict(msg),
            SessionError::Search(_) => ApiError::Internal(msg),
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::BadRequest(e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, msg) = match self {
            ApiError::BadRequest(m) => (StatusCode::BAD_REQUEST, m),
            ApiError::NotFound => (StatusCode::NOT_FOUND, "no such game".to_string()),
            ApiError::Conflict(m) => (StatusCode::CONFLICT, m),
            ApiError::Unprocessable(m) => (StatusCode::UNPROCESSABLE_ENTITY, m),
            ApiError::Internal(m) => (StatusCode::INTERNAL_SERVER_ERROR, m),
        };
        (status, Json(json!({ "error": msg }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

#[derive(Debug, Deserialize)]
pub struct CreateGame {
    pub expression: String,
    pub human_role: Player,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct Created {
    pub id: Uuid,
    pub state: StateView,
}

/// Runs `f` on a blocking thread; solves can take a while.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> ApiResult<T> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError::Internal(e.to_string()))?
}

fn lookup(state: &AppState, id: &str) -> ApiResult<SharedSession> {
    let id = Uuid::parse_str(id).map_err(|_| ApiError::NotFound)?;
    state.store.get(&id).ok_or(ApiError::NotFound)
}

fn persist(state: &AppState) -> ApiResult<()> {
    state.store.save().map_err(|e| ApiError::Internal(format!("snapshot failed: {e}")))
}

/// Locks one session and applies `f` on a blocking thread, then saves the
/// snapshot after the lock is released.
async fn with_session<T: Send + 'static>(
    state: Arc<AppState>,
    id: String,
    f: impl FnOnce(&mut GameSession) -> ApiResult<T> + Send + 'static,
) -> ApiResult<T> {
    blocking(move || {
        let shared = lookup(&state, &id)?;
        let out = {
            let mut session = shared.lock().map_err(|_| ApiError::Internal("session lock poisoned".into()))?;
            f(&mut session)
        };
        persist(&state)?;
        out
    })
    .await
}

pub async fn create_game(
    State(state): State<Arc<AppState>>,
    body: Result<Json<CreateGame>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<Created>)> {
    let Json(req) = body?;
    let created = blocking(move || {
        let session = GameSession::create(&req.expression, req.human_role, req.seed.unwrap_or(0), &state.engine)?;
        let view = session.view();
        state.store.insert(session);
        persist(&state)?;
        Ok(Created { id: view.id, state: view })
    })
    .await?;
    Ok((StatusCode::CREATED, Json(created)))
}

pub async fn get_game(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<StateView>> {
    let shared = lookup(&state, &id)?;
    let view = shared.lock().map_err(|_| ApiError::Internal("session lock poisoned".into()))?.view();
    Ok(Json(view))
}

pub async fn post_move(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<MoveRequest>, JsonRejection>,
) -> ApiResult<Json<StateView>> {
    lookup(&state, &id)?;
    let Json(mv) = body?;
    let view = with_session(state, id, move |s| {
        s.play(&mv)?;
        Ok(s.view())
    })
    .await?;
    Ok(Json(view))
}

pub async fn get_hint(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<Hint>> {
    Ok(Json(with_session(state, id, |s| Ok(s.hint()?)).await?))
}

pub async fn delete_game(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<StatusCode> {
    let uuid = Uuid::parse_str(&id).map_err(|_| ApiError::NotFound)?;
    if !state.store.remove(&uuid) {
        return Err(ApiError::NotFound);
    }
    blocking(move || persist(&state)).await?;
    Ok(StatusCode::NO_CONTENT)
}

pub async fn placeholder() -> axum::response::Html<&'static str> {
    axum::response::Html(include_str!("placeholder.html"))
}
