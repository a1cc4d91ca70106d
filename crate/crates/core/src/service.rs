//! HTTP API over in-memory projects. Each project has one writer lock, so
//! mutations apply serially and every successful mutation bumps the
//! project's revision by one.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::sync::{Mutex, RwLock};

use crate::interconnect::TopologyKind;
use crate::layout::{self, load_templates, render_svg, PlanState, TemplateLibrary};
use crate::project::{read, run_pipeline, save_project, simulate_project, PipelineReport, PipelineStatus, Project, ProjectError};

pub struct ProjectSlot {
    pub project: Project,
    /// Directory the project's relative paths resolve against.
    pub base: PathBuf,
    /// Where mutations are persisted; in-memory only when `None`.
    pub file: Option<PathBuf>,
    pub revision: u64,
    pub last_report: Option<PipelineReport>,
}

impl ProjectSlot {
    fn library(&self) -> Result<TemplateLibrary, ApiError> {
        let rel = self.project.templates.as_deref().ok_or(ApiError::from(ProjectError::NoTemplates))?;
        let text = read(&self.base.join(rel))?;
        Ok(load_templates(&text).map_err(ProjectError::from)?)
    }

    fn plan(&self, library: &TemplateLibrary) -> Result<PlanState, ApiError> {
        let p = &self.project;
        let mut state = PlanState::new(library, p.selections.clone(), p.bbox, p.spacing).map_err(ProjectError::from)?;
        state.history = p.history.clone();
        Ok(state)
    }

    /// Bump the revision and persist, after a successful mutation.
    fn commit(&mut self) -> Result<u64, ApiError> {
        self.revision += 1;
        if let Some(file) = &self.file {
            save_project(&self.project, file)?;
        }
        Ok(self.revision)
    }
}

#[derive(Clone, Default)]
pub struct AppState {
    projects: Arc<RwLock<HashMap<String, Arc<Mutex<ProjectSlot>>>>>,
}

impl AppState {
    pub fn new() -> Self {
        Self::default()
    }

    pub async fn insert(&self, id: impl Into<String>, project: Project, base: PathBuf, file: Option<PathBuf>) {
        let slot = ProjectSlot { project, base, file, revision: 0, last_report: None };
        self.projects.write().await.insert(id.into(), Arc::new(Mutex::new(slot)));
    }

    async fn slot(&self, id: &str) -> Result<Arc<Mutex<ProjectSlot>>, ApiError> {
        self.projects.read().await.get(id).cloned().ok_or_else(|| ApiError::NotFound(id.to_string()))
    }
}

#[derive(Debug)]
pub enum ApiError {
    NotFound(String),
    Project(ProjectError),
    Conflict(String),
}

impl From<ProjectError> for ApiError {
    fn from(e: ProjectError) -> Self {
        ApiError::Project(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, message) = match self {
            ApiError::NotFound(id) => (StatusCode::NOT_FOUND, format!("no project `{id}`")),
            ApiError::Conflict(m) => (StatusCode::CONFLICT, m),
            ApiError::Project(e) => {
                let status = match e {
                    ProjectError::Layout(_) | ProjectError::Sim(_) => StatusCode::BAD_REQUEST,
                    ProjectError::Io { .. } => StatusCode::INTERNAL_SERVER_ERROR,
                    _ => StatusCode::UNPROCESSABLE_ENTITY,
                };
                (status, e.to_string())
            }
        };
        (status, Json(json!({ "error": message }))).into_response()
    }
}

#[derive(Serialize)]
struct ProjectView<'a> {
    id: &'a str,
    revision: u64,
    project: &'a Project,
}

async fn get_project(State(app): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let slot = app.slot(&id).await?;
    let slot = slot.lock().await;
    Ok(Json(ProjectView { id: &id, revision: slot.revision, project: &slot.project }).into_response())
}

async fn check(State(app): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let slot = app.slot(&id).await?;
    let mut slot = slot.lock().await;
    let report = run_pipeline(&slot.project, &slot.base)?;
    slot.project.record(&report);
    slot.last_report = Some(report.clone());
    let revision = slot.commit()?;
    Ok(Json(json!({ "revision": revision, "report": report })).into_response())
}

#[derive(Deserialize)]
struct OptSelect {
    ip: String,
    variant: String,
}

async fn opt_select(State(app): State<AppState>, Path(id): Path<String>, Json(req): Json<OptSelect>) -> Result<Response, ApiError> {
    let slot = app.slot(&id).await?;
    let mut slot = slot.lock().await;
    let library = slot.library()?;
    let state = slot.plan(&library)?;
    let (next, deltas) = layout::opt_select(&library, &state, &req.ip, &req.variant).map_err(ProjectError::from)?;
    apply_plan(&mut slot, next, deltas)
}

async fn undo(State(app): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let slot = app.slot(&id).await?;
    let mut slot = slot.lock().await;
    let library = slot.library()?;
    let state = slot.plan(&library)?;
    let (next, deltas) = layout::undo(&library, &state).map_err(ProjectError::from)?;
    apply_plan(&mut slot, next, deltas)
}

fn apply_plan(slot: &mut ProjectSlot, next: PlanState, deltas: layout::Deltas) -> Result<Response, ApiError> {
    slot.project.selections = next.selections;
    slot.project.history = next.history;
    let revision = slot.commit()?;
    let fit = next.floorplan.fit;
    Ok(Json(json!({ "revision": revision, "floorplan": next.floorplan, "deltas": deltas, "fit": fit })).into_response())
}

async fn floorplan_svg(State(app): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let slot = app.slot(&id).await?;
    let slot = slot.lock().await;
    if let Some(report) = &slot.last_report {
        if report.status != PipelineStatus::Ok {
            return Err(ApiError::Conflict("latest check found violations; no floorplan is produced".into()));
        }
    }
    let library = slot.library()?;
    let plan = slot.plan(&library)?;
    Ok(([(header::CONTENT_TYPE, "image/svg+xml")], render_svg(&plan.floorplan)).into_response())
}

async fn templates(State(app): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let slot = app.slot(&id).await?;
    let slot = slot.lock().await;
    Ok(Json(slot.library()?.entries()).into_response())
}

#[derive(Deserialize, Default)]
struct TopologyParams {
    nodes: Option<usize>,
    width: Option<u32>,
    arbitration: Option<u64>,
    c_node: Option<f64>,
    c_bus: Option<f64>,
    c_link: Option<f64>,
    leakage_per_area: Option<f64>,
    freq_mhz: Option<f64>,
}

#[derive(Deserialize)]
struct TopologyRequest {
    kind: Option<TopologyKind>,
    #[serde(default)]
    params: TopologyParams,
}

async fn topology(State(app): State<AppState>, Path(id): Path<String>, Json(req): Json<TopologyRequest>) -> Result<Response, ApiError> {
    let slot = app.slot(&id).await?;
    let mut slot = slot.lock().await;
    let mut t = slot.project.topology.clone();
    let p = req.params;
    t.kind = req.kind.unwrap_or(t.kind);
    t.nodes = p.nodes.unwrap_or(t.nodes);
    t.width = p.width.unwrap_or(t.width);
    t.arbitration = p.arbitration.unwrap_or(t.arbitration);
    t.c_node = p.c_node.unwrap_or(t.c_node);
    t.c_bus = p.c_bus.unwrap_or(t.c_bus);
    t.c_link = p.c_link.unwrap_or(t.c_link);
    t.leakage_per_area = p.leakage_per_area.unwrap_or(t.leakage_per_area);
    t.freq_mhz = p.freq_mhz.unwrap_or(t.freq_mhz);
    t.validate().map_err(ProjectError::from)?;
    let mut candidate = slot.project.clone();
    candidate.topology = t;
    let report = simulate_project(&candidate)?;
    slot.project = candidate;
    let revision = slot.commit()?;
    Ok(Json(json!({ "revision": revision, "report": report })).into_response())
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/projects/{id}", get(get_project))
        .route("/api/projects/{id}/check", post(check))
        .route("/api/projects/{id}/opt_select", post(opt_select))
        .route("/api/projects/{id}/undo", post(undo))
        .route("/api/projects/{id}/floorplan.svg", get(floorplan_svg))
        .route("/api/projects/{id}/templates", get(templates))
        .route("/api/projects/{id}/topology", post(topology))
        .with_state(state)
}

/// Serve until the process is stopped.
pub async fn serve(addr: SocketAddr, state: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}
