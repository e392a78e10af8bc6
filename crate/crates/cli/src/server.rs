//! Local HTTP server for the diagram viewer.
//!
//! Requests are serialized through one session lock; position snapshots are
//! published on a watch channel and streamed as server-sent events at a
//! capped rate.

use std::convert::Infallible;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, PoisonError};
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::sse::{Event, KeepAlive, Sse};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use futures::Stream;
use helgraph_core::api::{execute, ApiError, Command};
use helgraph_core::config::EngineConfig;
use helgraph_core::layout::{LayoutSnapshot, LayoutState};
use helgraph_core::session::DiagramSession;
use helgraph_core::{interchange, EntityGraph, EntityId};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use tokio::sync::watch;

use crate::export::{INDEX_HTML, VIEWER_CSS, VIEWER_JS};

/// Default cap on layout snapshots per second, per client.
pub const DEFAULT_MAX_RATE: f64 = 30.0;

/// Session operations reachable under `/session/{op}`, with their command tags.
pub const SESSION_OPS: &[(&str, &str)] = &[
    ("expand", "expand"),
    ("collapse", "collapse"),
    ("remove", "remove"),
    ("refresh", "refresh"),
    ("preset", "preset"),
    ("move", "move"),
    ("select", "select"),
    ("relation", "setRelation"),
    ("clearHighlight", "clearHighlight"),
];

#[derive(Debug, Clone)]
pub struct ServerOptions {
    pub max_rate: f64,
    /// Where `PUT /config` persists the configuration, if anywhere.
    pub config_path: Option<PathBuf>,
}

impl Default for ServerOptions {
    fn default() -> Self {
        Self { max_rate: DEFAULT_MAX_RATE, config_path: None }
    }
}

struct Shared {
    session: Mutex<DiagramSession>,
    snapshots: watch::Sender<LayoutSnapshot>,
    options: ServerOptions,
}

#[derive(Clone)]
pub struct AppState(Arc<Shared>);

impl AppState {
    /// Opens a session whose layout runs publish throttled snapshots.
    pub fn new(graph: EntityGraph, config: EngineConfig, options: ServerOptions) -> Self {
        let (tx, _) = watch::channel(LayoutSnapshot {
            positions: Default::default(),
            converged: false,
            iteration: 0,
        });
        let interval = min_interval(options.max_rate);
        let publisher = tx.clone();
        let mut last: Option<Instant> = None;
        let observer = Box::new(move |s: &LayoutState| {
            let now = Instant::now();
            if s.converged || last.is_none_or(|t| now - t >= interval) {
                last = Some(now);
                publisher.send_replace(s.snapshot());
            }
        });
        let session = DiagramSession::with_observer(Arc::new(graph), config, Some(observer));
        tx.send_replace(session.snapshot());
        Self(Arc::new(Shared { session: Mutex::new(session), snapshots: tx, options }))
    }

    pub fn subscribe(&self) -> watch::Receiver<LayoutSnapshot> {
        self.0.snapshots.subscribe()
    }

    /// Runs one command on a blocking thread, holding the session lock.
    pub async fn run(&self, cmd: Command) -> Result<Value, ApiError> {
        let shared = Arc::clone(&self.0);
        tokio::task::spawn_blocking(move || {
            let moves = cmd.moves_nodes();
            let mut session = shared.session.lock().unwrap_or_else(PoisonError::into_inner);
            let result = execute(&mut session, cmd);
            if moves {
                shared.snapshots.send_replace(session.snapshot());
            }
            result
        })
        .await
        .expect("session task does not panic")
    }
}

fn min_interval(rate: f64) -> Duration {
    Duration::from_secs_f64(1.0 / rate.max(0.1))
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/", get(index))
        .route("/assets/{file}", get(asset))
        .route("/graph", get(document))
        .route("/graph/meta", get(meta))
        .route("/node/{id}", get(node))
        .route("/session/{op}", post(session_op))
        .route("/filter", post(filter))
        .route("/layout", get(layout))
        .route("/layout/stream", get(stream))
        .route("/glyphs", get(glyphs))
        .route("/config", get(get_config).put(put_config))
        .with_state(state)
}

fn status(e: &ApiError) -> StatusCode {
    match e.kind() {
        "UnknownId" => StatusCode::NOT_FOUND,
        "NotVisible" | "NoChildren" | "NotExpanded" => StatusCode::CONFLICT,
        "Layout" => StatusCode::INTERNAL_SERVER_ERROR,
        _ => StatusCode::BAD_REQUEST,
    }
}

fn respond(result: Result<Value, ApiError>) -> Response {
    match result {
        Ok(v) => Json(v).into_response(),
        Err(e) => (status(&e), Json(e.to_json())).into_response(),
    }
}

fn parse_body<T: DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::BadRequest(e.to_string()))
}

async fn index() -> Html<String> {
    Html(INDEX_HTML.replace(r#"data-mode="bundle""#, r#"data-mode="server""#))
}

async fn asset(Path(file): Path<String>) -> Response {
    let (body, mime) = match file.as_str() {
        "viewer.js" => (VIEWER_JS, "text/javascript"),
        "viewer.css" => (VIEWER_CSS, "text/css"),
        _ => return StatusCode::NOT_FOUND.into_response(),
    };
    ([(header::CONTENT_TYPE, mime)], body).into_response()
}

/// The loaded graph as a canonical interchange document.
async fn document(State(state): State<AppState>) -> Response {
    let shared = Arc::clone(&state.0);
    let bytes = tokio::task::spawn_blocking(move || {
        let session = shared.session.lock().unwrap_or_else(PoisonError::into_inner);
        interchange::write(session.graph())
    })
    .await
    .expect("serialization does not panic");
    ([(header::CONTENT_TYPE, "application/json")], bytes).into_response()
}

async fn meta(State(state): State<AppState>) -> Response {
    respond(state.run(Command::Meta).await)
}

async fn node(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    respond(state.run(Command::Inspect(helgraph_core::api::IdRequest { id: id.into() })).await)
}

async fn session_op(State(state): State<AppState>, Path(op): Path<String>, body: Bytes) -> Response {
    let Some(&(_, tag)) = SESSION_OPS.iter().find(|(name, _)| *name == op) else {
        let err = json!({ "error": { "kind": "UnknownOperation", "message": format!("no session operation `{op}`") } });
        return (StatusCode::NOT_FOUND, Json(err)).into_response();
    };
    let cmd = (|| {
        let mut fields: serde_json::Map<String, Value> =
            if body.iter().all(u8::is_ascii_whitespace) { Default::default() } else { parse_body(&body)? };
        fields.insert("op".into(), tag.into());
        serde_json::from_value::<Command>(Value::Object(fields)).map_err(|e| ApiError::BadRequest(e.to_string()))
    })();
    match cmd {
        Ok(cmd) => respond(state.run(cmd).await),
        Err(e) => respond(Err(e)),
    }
}

async fn filter(State(state): State<AppState>, body: Bytes) -> Response {
    match parse_body(&body) {
        Ok(req) => respond(state.run(Command::Filter(req)).await),
        Err(e) => respond(Err(e)),
    }
}

async fn layout(State(state): State<AppState>) -> Response {
    respond(state.run(Command::Layout).await)
}

/// Current snapshot first, then the latest one after each change, at most
/// `max_rate` events per second.
async fn stream(State(state): State<AppState>) -> Sse<impl Stream<Item = Result<Event, Infallible>>> {
    let interval = min_interval(state.0.options.max_rate);
    let rx = state.subscribe();
    let events = futures::stream::unfold((rx, true), move |(mut rx, first)| async move {
        if !first {
            tokio::time::sleep(interval).await;
            rx.changed().await.ok()?;
        }
        let snapshot = rx.borrow_and_update().clone();
        let event = Event::default().event("layout").json_data(&snapshot).expect("snapshots serialize");
        Some((Ok(event), (rx, false)))
    });
    Sse::new(events).keep_alive(KeepAlive::default())
}

/// `?ids=a,b` lists comma-separated ids; `?id=x` (repeatable) names one id
/// exactly. No ids means every visible node.
async fn glyphs(State(state): State<AppState>, Query(params): Query<Vec<(String, String)>>) -> Response {
    let mut ids: Vec<EntityId> = Vec::new();
    let mut any = false;
    for (key, value) in params {
        match key.as_str() {
            "ids" => {
                any = true;
                ids.extend(value.split(',').filter(|s| !s.is_empty()).map(EntityId::from));
            }
            "id" => {
                any = true;
                ids.push(value.into());
            }
            _ => {}
        }
    }
    respond(state.run(Command::Glyphs { ids: any.then_some(ids) }).await)
}

async fn get_config(State(state): State<AppState>) -> Response {
    respond(state.run(Command::GetConfig).await)
}

async fn put_config(State(state): State<AppState>, body: Bytes) -> Response {
    let config: EngineConfig = match parse_body(&body) {
        Ok(c) => c,
        Err(e) => return respond(Err(e)),
    };
    if let Some(path) = &state.0.options.config_path {
        if let Err(e) = std::fs::write(path, config.to_toml_string()) {
            let err = json!({ "error": { "kind": "ConfigWrite", "message": format!("{}: {e}", path.display()) } });
            return (StatusCode::INTERNAL_SERVER_ERROR, Json(err)).into_response();
        }
    }
    respond(state.run(Command::SetConfig { config: Box::new(config) }).await)
}
