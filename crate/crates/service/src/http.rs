//! HTTP endpoints.
//!
//! | method | path | body / reply |
//! |---|---|---|
//! | POST | `/sessions` | `{"id"}` |
//! | GET | `/sessions/{id}` | `{"id","revision","panels":[{"index","revision","spec"}]}` |
//! | PUT | `/sessions/{id}/panels/{i}` | spec in, `{"revision"}` out |
//! | POST | `/sessions/{id}/panels` | optional spec in, `{"index","revision"}` out |
//! | DELETE | `/sessions/{id}/panels/{i}` | `{"revision"}` |
//! | GET | `/sessions/{id}/panels/{i}/displaylist` | wire display list |
//! | GET | `/sessions/{id}/panels/{i}/export?format=hpgl\|svg` | file bytes |
//!
//! Errors come back as `{"error": kind, "message": text}`, plus `"fields"`
//! for validation failures.

use std::net::SocketAddr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;
use tokio::net::TcpListener;
use tower_http::cors::CorsLayer;

use crate::spec::PanelSpec;
use crate::store::{ExportFormat, ServiceError, SessionStore};
use crate::wire::revisioned_display_list_json;

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let (status, kind) = match &self {
            ServiceError::UnknownSession | ServiceError::UnknownPanel(_) => {
                (StatusCode::NOT_FOUND, "not_found")
            }
            ServiceError::Capacity(_) => (StatusCode::CONFLICT, "capacity"),
            ServiceError::Validation(_) => (StatusCode::UNPROCESSABLE_ENTITY, "validation"),
            ServiceError::Render(_) => (StatusCode::UNPROCESSABLE_ENTITY, "render"),
            ServiceError::Export(_) => (StatusCode::UNPROCESSABLE_ENTITY, "export"),
        };
        let mut body = json!({"error": kind, "message": self.to_string()});
        if let ServiceError::Validation(fields) = &self {
            body["fields"] = json!(fields);
        }
        (status, Json(body)).into_response()
    }
}

fn bad_request(message: String) -> Response {
    (
        StatusCode::BAD_REQUEST,
        Json(json!({"error": "bad_request", "message": message})),
    )
        .into_response()
}

fn parse_spec(body: &[u8]) -> Result<PanelSpec, String> {
    serde_json::from_slice(body).map_err(|e| format!("panel spec: {e}"))
}

type Shared = State<Arc<SessionStore>>;

async fn create_session(State(st): Shared) -> Result<Response, ServiceError> {
    let id = st.create_session()?;
    Ok((StatusCode::CREATED, Json(json!({ "id": id }))).into_response())
}

async fn get_session(State(st): Shared, Path(id): Path<String>) -> Result<Response, ServiceError> {
    let snap = st.snapshot(&id)?;
    let panels: Vec<_> = snap
        .panels
        .iter()
        .enumerate()
        .map(|(i, p)| json!({"index": i, "revision": p.revision, "spec": p.spec}))
        .collect();
    Ok(Json(json!({"id": id, "revision": snap.revision, "panels": panels})).into_response())
}

async fn put_panel(
    State(st): Shared,
    Path((id, index)): Path<(String, usize)>,
    body: Bytes,
) -> Response {
    let spec = match parse_spec(&body) {
        Ok(s) => s,
        Err(m) => return bad_request(m),
    };
    match st.update_panel(&id, index, spec) {
        Ok(rev) => Json(json!({ "revision": rev })).into_response(),
        Err(e) => e.into_response(),
    }
}

async fn add_panel(State(st): Shared, Path(id): Path<String>, body: Bytes) -> Response {
    let spec = if body.iter().all(u8::is_ascii_whitespace) {
        PanelSpec::default()
    } else {
        match parse_spec(&body) {
            Ok(s) => s,
            Err(m) => return bad_request(m),
        }
    };
    match st.add_panel(&id, spec) {
        Ok((index, rev)) => (
            StatusCode::CREATED,
            Json(json!({"index": index, "revision": rev})),
        )
            .into_response(),
        Err(e) => e.into_response(),
    }
}

async fn delete_panel(
    State(st): Shared,
    Path((id, index)): Path<(String, usize)>,
) -> Result<Response, ServiceError> {
    let rev = st.remove_panel(&id, index)?;
    Ok(Json(json!({ "revision": rev })).into_response())
}

async fn display_list(
    State(st): Shared,
    Path((id, index)): Path<(String, usize)>,
) -> Result<Response, ServiceError> {
    let p = st.panel(&id, index)?;
    Ok((
        [(header::CONTENT_TYPE, "application/json")],
        revisioned_display_list_json(p.revision, &p.list),
    )
        .into_response())
}

#[derive(Deserialize)]
struct ExportQuery {
    format: String,
}

async fn export(
    State(st): Shared,
    Path((id, index)): Path<(String, usize)>,
    Query(q): Query<ExportQuery>,
) -> Response {
    let format = match q.format.as_str() {
        "hpgl" => ExportFormat::Hpgl,
        "svg" => ExportFormat::Svg,
        other => return bad_request(format!("unknown export format '{other}'")),
    };
    match st.export_panel(&id, index, format) {
        Ok(bytes) => ([(header::CONTENT_TYPE, format.content_type())], bytes).into_response(),
        Err(e) => e.into_response(),
    }
}

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/panels", post(add_panel))
        .route(
            "/sessions/{id}/panels/{index}",
            put(put_panel).delete(delete_panel),
        )
        .route("/sessions/{id}/panels/{index}/displaylist", get(display_list))
        .route("/sessions/{id}/panels/{index}/export", get(export))
        .layer(CorsLayer::permissive())
        .with_state(store)
}

/// Serves on an already bound listener until the future is dropped, evicting
/// idle sessions once a minute.
pub async fn serve(listener: TcpListener, store: Arc<SessionStore>) -> std::io::Result<()> {
    let sweeper = {
        let store = store.clone();
        tokio::spawn(async move {
            let mut tick = tokio::time::interval(Duration::from_secs(60));
            loop {
                tick.tick().await;
                store.evict_idle(Instant::now());
            }
        })
    };
    let result = axum::serve(listener, router(store)).await;
    sweeper.abort();
    result
}

/// Binds `addr` and serves until interrupted.
pub async fn run(addr: SocketAddr) -> std::io::Result<()> {
    let listener = TcpListener::bind(addr).await?;
    let store = Arc::new(SessionStore::default());
    tokio::select! {
        r = serve(listener, store) => r,
        _ = tokio::signal::ctrl_c() => Ok(()),
    }
}
