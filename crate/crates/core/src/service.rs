//! Stateless HTTP JSON service.
//!
//! | route | body |
//! |---|---|
//! | `POST /api/v1/design` | [`DesignRequest`] |
//! | `POST /api/v1/precision` | [`DesignRequest`] |
//! | `POST /api/v1/ci` | [`DesignRequest`] |
//! | `GET /api/v1/tables/{id}` | grid overrides as query parameters |
//! | `GET /healthz` | |
//!
//! Rejected requests get `422` with `{"errors": [{field, code, message}]}`.

use std::future::Future;
use std::time::Instant;

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{Path, Query, Request};
use axum::http::{HeaderValue, Method, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;
use tokio::net::TcpListener;
use tower_http::cors::{AllowOrigin, Any, CorsLayer};

use crate::api::{self, ApiError, DesignRequest, Operation};
use crate::table::{self, TableId, TableSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServiceConfig {
    pub bind: String,
    pub port: u16,
    /// Origins allowed by CORS; `*` allows any, empty disables CORS headers.
    pub origins: Vec<String>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            bind: "127.0.0.1".into(),
            port: 8080,
            origins: Vec::new(),
        }
    }
}

/// The service routes, without a listener.
pub fn router(origins: &[String]) -> Router {
    let app = Router::new()
        .route("/api/v1/design", post(design))
        .route("/api/v1/precision", post(precision))
        .route("/api/v1/ci", post(ci))
        .route("/api/v1/tables/{id}", get(table_handler))
        .route("/healthz", get(health))
        .layer(middleware::from_fn(log_request));
    match cors(origins) {
        Some(layer) => app.layer(layer),
        None => app,
    }
}

fn cors(origins: &[String]) -> Option<CorsLayer> {
    let origins: Vec<&str> = origins.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
    if origins.is_empty() {
        return None;
    }
    let allow = if origins.contains(&"*") {
        AllowOrigin::any()
    } else {
        AllowOrigin::list(origins.iter().filter_map(|o| HeaderValue::from_str(o).ok()))
    };
    Some(
        CorsLayer::new()
            .allow_origin(allow)
            .allow_methods([Method::GET, Method::POST])
            .allow_headers(Any),
    )
}

async fn log_request(req: Request, next: Next) -> Response {
    let (method, path) = (req.method().clone(), req.uri().path().to_string());
    let start = Instant::now();
    let response = next.run(req).await;
    tracing::info!(
        %method,
        path,
        status = response.status().as_u16(),
        micros = start.elapsed().as_micros() as u64,
        "request"
    );
    response
}

fn rejected(e: ApiError) -> Response {
    let status = if e.is_internal() {
        StatusCode::INTERNAL_SERVER_ERROR
    } else {
        StatusCode::UNPROCESSABLE_ENTITY
    };
    (status, Json(e)).into_response()
}

fn answer(op: Operation, body: &[u8]) -> Response {
    let req: DesignRequest = match serde_json::from_slice(body) {
        Ok(r) => r,
        Err(e) => return rejected(ApiError::invalid_body(e.to_string())),
    };
    match api::handle(op, &req) {
        Ok(r) => Json(r).into_response(),
        Err(e) => rejected(e),
    }
}

async fn design(body: Bytes) -> Response {
    answer(Operation::Design, &body)
}

async fn precision(body: Bytes) -> Response {
    answer(Operation::Precision, &body)
}

async fn ci(body: Bytes) -> Response {
    answer(Operation::Ci, &body)
}

/// Grid overrides, comma separated.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableQuery {
    confidences: Option<String>,
    groups: Option<String>,
    columns: Option<String>,
    continuity: Option<bool>,
}

fn numbers(field: &str, s: &Option<String>) -> Result<Option<Vec<f64>>, ApiError> {
    let Some(s) = s else { return Ok(None) };
    s.split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
        .map_err(|e| ApiError {
            errors: vec![api::FieldError {
                field: field.to_string(),
                code: api::ErrorCode::InvalidBody,
                message: format!("`{field}` must be a comma-separated list of numbers: {e}"),
            }],
        })
}

async fn table_handler(Path(id): Path<String>, query: Result<Query<TableQuery>, QueryRejection>) -> Response {
    let Ok(id) = id.parse::<TableId>() else {
        let e = ApiError {
            errors: vec![api::FieldError {
                field: "id".into(),
                code: api::ErrorCode::OutOfRange,
                message: format!("unknown table `{id}`"),
            }],
        };
        return (StatusCode::NOT_FOUND, Json(e)).into_response();
    };
    let q = match query {
        Ok(Query(q)) => q,
        Err(e) => return rejected(ApiError::invalid_body(e.body_text())),
    };
    let mut spec = TableSpec::default_for(id);
    let grids = (
        numbers("confidences", &q.confidences),
        numbers("groups", &q.groups),
        numbers("columns", &q.columns),
    );
    match grids {
        (Ok(c), Ok(g), Ok(col)) => {
            if let Some(c) = c {
                spec = spec.with_confidences(c);
            }
            if let Some(g) = g {
                spec = spec.with_groups(g);
            }
            if let Some(col) = col {
                spec = spec.with_columns(col);
            }
        }
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return rejected(e),
    }
    if let Some(cc) = q.continuity {
        spec = spec.with_continuity_correction(cc);
    }
    match tokio::task::spawn_blocking(move || table::generate(&spec)).await {
        Ok(Ok(t)) => Json(t).into_response(),
        Ok(Err(e)) => rejected(ApiError::from(e)),
        Err(e) => (StatusCode::INTERNAL_SERVER_ERROR, e.to_string()).into_response(),
    }
}

async fn health() -> Response {
    match table::golden_checksum() {
        Ok(sum) => Json(json!({
            "status": "ok",
            "version": env!("CARGO_PKG_VERSION"),
            "golden_checksum": sum,
        }))
        .into_response(),
        Err(e) => (
            StatusCode::INTERNAL_SERVER_ERROR,
            Json(json!({ "status": "error", "message": e.to_string() })),
        )
            .into_response(),
    }
}

/// Serves on an already bound listener until `shutdown` resolves; requests
/// in flight are allowed to finish.
pub async fn serve_on<F>(listener: TcpListener, origins: &[String], shutdown: F) -> std::io::Result<()>
where
    F: Future<Output = ()> + Send + 'static,
{
    axum::serve(listener, router(origins)).with_graceful_shutdown(shutdown).await
}

/// Binds and serves until interrupted.
pub async fn serve(config: ServiceConfig) -> std::io::Result<()> {
    let _ = tracing_subscriber::fmt().with_target(false).try_init();
    let listener = TcpListener::bind((config.bind.as_str(), config.port)).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    serve_on(listener, &config.origins, shutdown_signal()).await
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = term => {},
    }
    tracing::info!("shutting down");
}
