//! HTTP service hosting live e-Valuate games against the engine.
//!
//! ```text
//! POST   /api/games             {expression, human_role, seed?} -> 201 {id, state}
//! GET    /api/games/{id}        -> state
//! POST   /api/games/{id}/moves  {type: "digit", digit} | {type: "assign", variable} -> state
//! GET    /api/games/{id}/hint   -> {move, value}
//! DELETE /api/games/{id}        -> 204
//! ```
//!
//! Errors are `{"error": message}` with status 400 (parse error, variable
//! cap, illegal move), 404 (unknown game), 409 (not your turn, game over)
//! or 422 (no instantiation has a defined value).

pub mod api;
pub mod session;
pub mod store;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::routing::{get, post};
use axum::Router;
use tower_http::services::{ServeDir, ServeFile};

pub use session::{EngineConfig, GameSession, MoveRequest, SessionError, StateView};
pub use store::SessionStore;

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub addr: SocketAddr,
    /// Directory holding the UI bundle; a placeholder page is served if unset.
    pub static_dir: Option<PathBuf>,
    pub snapshot: Option<PathBuf>,
    pub idle_timeout: Duration,
    pub engine: EngineConfig,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            addr: SocketAddr::from(([127, 0, 0, 1], 8080)),
            static_dir: None,
            snapshot: None,
            idle_timeout: Duration::from_secs(24 * 60 * 60),
            engine: EngineConfig::default(),
        }
    }
}

pub struct AppState {
    pub store: SessionStore,
    pub engine: EngineConfig,
}

impl AppState {
    pub fn new(store: SessionStore, engine: EngineConfig) -> Self {
        AppState { store, engine }
    }
}

pub fn router(state: Arc<AppState>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/games", post(api::create_game))
        .route("/api/games/{id}", get(api::get_game).delete(api::delete_game))
        .route("/api/games/{id}/moves", post(api::post_move))
        .route("/api/games/{id}/hint", get(api::get_hint))
        .with_state(state);
    match static_dir {
        // unknown paths fall back to index.html so /game/{id} reaches the app
        Some(dir) => {
            let index = ServeFile::new(dir.join("index.html"));
            api.fallback_service(ServeDir::new(dir).fallback(index))
        }
        None => api.route("/", get(api::placeholder)),
    }
}

/// Binds, serves until Ctrl-C, and expires idle sessions in the background.
pub async fn serve(config: ServerConfig) -> std::io::Result<()> {
    let store = SessionStore::load(config.snapshot.clone(), &config.engine)?;
    let state = Arc::new(AppState::new(store, config.engine));
    let reaper = state.clone();
    let ttl = config.idle_timeout;
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60).min(ttl.max(Duration::from_secs(1))));
        loop {
            tick.tick().await;
            if reaper.store.expire(ttl) > 0 {
                let _ = reaper.store.save();
            }
        }
    });
    let listener = tokio::net::TcpListener::bind(config.addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state, config.static_dir))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
