//! Read-only JSON API over one loaded graph snapshot.
//!
//! | method | path | body |
//! |---|---|---|
//! | GET | `/v1/ingredients?q=` | name search, at most 25 hits |
//! | GET | `/v1/ingredients/{id}/substitutes` | ranked delta reports |
//! | POST | `/v1/recipes/analyze` | `{"ingredients": [..]}` |
//! | POST | `/v1/recipes/substitute` | `{"ingredients": [..], "original", "candidate"}` |
//! | GET | `/v1/stats` | node, relation type and edge counts |

mod config;
mod error;

pub use config::{ConfigError, ServiceConfig, DEFAULT_BUDGET_MS, ENV_PREFIX};
pub use error::ApiError;

use std::future::Future;
use std::sync::Arc;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use axum::body::Bytes;
use axum::extract::{Path, Query, Request, State};
use axum::http::{header, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use tokio::net::TcpListener;

use crate::align::{normalize_name, AlignError, LinkTable};
use crate::graph::{load_snapshot, Graph, GraphError, NodeKind, RelationType};
use crate::imputer::{ImputerError, ImputerModel};
use crate::recommend::{analyze_recipe, apply_substitution, fixed3_opt, recommend, AnalysisReport, DeltaReport, Resolver};

pub const MAX_SEARCH_RESULTS: usize = 25;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{}: {source}", path.display())]
    Io { path: std::path::PathBuf, source: std::io::Error },
    #[error("snapshot: {0}")]
    Snapshot(#[from] GraphError),
    #[error("link table: {0}")]
    Links(#[from] AlignError),
    #[error("model: {0}")]
    Model(#[from] ImputerError),
}

struct SearchEntry {
    id: String,
    display_name: String,
    lower_name: String,
    normalized: String,
}

/// Everything a request handler reads. Built once; never mutated.
pub struct AppState {
    graph: Graph,
    resolver: Resolver,
    search: Vec<SearchEntry>,
    budget: Duration,
}

impl AppState {
    pub fn new(graph: Graph, links: LinkTable, budget: Duration) -> Self {
        let resolver = Resolver::new(&graph, links);
        let search = graph
            .nodes_of_kind(NodeKind::Ingredient)
            .into_iter()
            .map(|id| {
                let display_name = graph.display_name(id);
                SearchEntry {
                    id: id.to_string(),
                    lower_name: display_name.to_lowercase(),
                    normalized: normalize_name(&display_name).as_str().to_string(),
                    display_name,
                }
            })
            .collect();
        Self { graph, resolver, search, budget }
    }

    /// Loads the snapshot, link table and model named in `cfg`.
    pub fn load(cfg: &ServiceConfig) -> Result<Self, ServiceError> {
        cfg.check_paths()?;
        let read = |path: &std::path::Path| {
            std::fs::read_to_string(path).map_err(|source| ServiceError::Io { path: path.to_path_buf(), source })
        };
        let graph = load_snapshot(&read(&cfg.snapshot)?)?;
        let links = match &cfg.links {
            Some(p) => LinkTable::from_csv(&read(p)?)?,
            None => LinkTable::default(),
        };
        if let Some(p) = &cfg.model {
            ImputerModel::from_json(&read(p)?)?;
        }
        Ok(Self::new(graph, links, cfg.budget()))
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    fn search(&self, q: &str) -> Vec<(u8, &SearchEntry)> {
        let lower = q.trim().to_lowercase();
        let id_form = lower.replace(' ', "_");
        let normalized = normalize_name(q);
        let mut hits: Vec<(u8, &SearchEntry)> = self
            .search
            .iter()
            .filter_map(|e| {
                let quality = if e.lower_name == lower || e.id == id_form {
                    0
                } else if e.lower_name.starts_with(&lower) || e.id.starts_with(&id_form) {
                    1
                } else if !normalized.as_str().is_empty() && e.normalized == normalized.as_str() {
                    2
                } else if !normalized.as_str().is_empty() && e.normalized.starts_with(normalized.as_str()) {
                    3
                } else {
                    return None;
                };
                Some((quality, e))
            })
            .collect();
        hits.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.id.cmp(&b.1.id)));
        hits.truncate(MAX_SEARCH_RESULTS);
        hits
    }
}

fn json<T: Serialize>(value: &T) -> Response {
    let body = serde_json::to_string(value).expect("response serializes");
    ([(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request("malformed_body", e.to_string()))
}

#[derive(Deserialize)]
struct SearchParams {
    q: Option<String>,
}

#[derive(Serialize)]
struct SearchHit<'a> {
    id: &'a str,
    display_name: &'a str,
    #[serde(serialize_with = "fixed3_opt")]
    wf: Option<f64>,
    imputed: bool,
}

async fn search_ingredients(State(st): State<Arc<AppState>>, Query(p): Query<SearchParams>) -> Result<Response, ApiError> {
    let q = p.q.unwrap_or_default();
    if q.trim().is_empty() {
        return Err(ApiError::bad_request("empty_query", "query parameter q must not be empty"));
    }
    let hits: Vec<SearchHit> = st
        .search(&q)
        .into_iter()
        .map(|(_, e)| {
            let wf = st.graph.measure(&e.id, RelationType::HasWaterFootprint);
            SearchHit {
                id: &e.id,
                display_name: &e.display_name,
                wf: wf.map(|m| m.value),
                imputed: wf.is_some_and(|m| m.imputed()),
            }
        })
        .collect();
    Ok(json(&hits))
}

async fn substitutes(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let ranked = recommend(&st.graph, &id)?;
    Ok(json(&ranked.iter().map(DeltaReport::for_ingredient).collect::<Vec<_>>()))
}

#[derive(Deserialize)]
struct AnalyzeBody {
    ingredients: Vec<String>,
}

async fn analyze(State(st): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: AnalyzeBody = parse_body(&body)?;
    let a = analyze_recipe(&st.graph, &req.ingredients, &st.resolver)?;
    Ok(json(&AnalysisReport::from(&a)))
}

#[derive(Deserialize)]
struct SubstituteBody {
    ingredients: Vec<String>,
    original: String,
    candidate: String,
}

async fn substitute(State(st): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: SubstituteBody = parse_body(&body)?;
    let a = analyze_recipe(&st.graph, &req.ingredients, &st.resolver)?;
    let (_, report) = apply_substitution(&st.graph, &a, &req.original, &req.candidate)?;
    Ok(json(&report))
}

async fn stats(State(st): State<Arc<AppState>>) -> Response {
    json(&st.graph.stats())
}

async fn not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "no_route", "no such endpoint")
}

fn unix_ts() -> String {
    let d = SystemTime::now().duration_since(UNIX_EPOCH).unwrap_or_default();
    format!("{}.{:03}", d.as_secs(), d.subsec_millis())
}

/// Writes `ts method path status ms` per request and warns past the budget.
async fn log_requests(State(st): State<Arc<AppState>>, req: Request, next: Next) -> Response {
    let method = req.method().clone();
    let path = req.uri().path().to_string();
    let start = Instant::now();
    let resp = next.run(req).await;
    let elapsed = start.elapsed();
    let ms = elapsed.as_secs_f64() * 1000.0;
    log::info!(target: "aquasub::access", "{} {method} {path} {} {ms:.3}", unix_ts(), resp.status().as_u16());
    if elapsed > st.budget {
        log::warn!(target: "aquasub::access", "{method} {path} took {ms:.3} ms, over the {} ms budget", st.budget.as_millis());
    }
    resp
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/v1/ingredients", get(search_ingredients))
        .route("/v1/ingredients/{id}/substitutes", get(substitutes))
        .route("/v1/recipes/analyze", post(analyze))
        .route("/v1/recipes/substitute", post(substitute))
        .route("/v1/stats", get(stats))
        .fallback(not_found)
        .layer(middleware::from_fn_with_state(state.clone(), log_requests))
        .with_state(state)
}

/// Serves until `shutdown` resolves, then drains in-flight requests.
pub async fn serve(
    listener: TcpListener,
    state: Arc<AppState>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(state)).with_graceful_shutdown(shutdown).await
}

/// Loads everything named in `cfg`, binds and serves until Ctrl-C.
pub async fn run(cfg: ServiceConfig) -> Result<(), ServiceError> {
    let state = Arc::new(AppState::load(&cfg)?);
    let listener = TcpListener::bind(cfg.listen)
        .await
        .map_err(|source| ServiceError::Io { path: cfg.listen.to_string().into(), source })?;
    let addr = listener.local_addr().map_err(|source| ServiceError::Io { path: cfg.listen.to_string().into(), source })?;
    log::info!("serving {} on http://{addr}", cfg.snapshot.display());
    let shutdown = async {
        let _ = tokio::signal::ctrl_c().await;
        log::info!("shutting down");
    };
    serve(listener, state, shutdown)
        .await
        .map_err(|source| ServiceError::Io { path: addr.to_string().into(), source })
}
