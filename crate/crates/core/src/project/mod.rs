//! Project documents and the end-to-end pipeline: program → sessions →
//! equivalence against bound hardware → interconnect → floorplan.

mod pipeline;

pub use pipeline::{program_workload, run_pipeline, simulate_project, ObjectCheck, PipelineReport, PipelineStatus};

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::equiv::{BindingError, Outcome};
use crate::frontend::FrontendError;
use crate::hw::HwError;
use crate::interconnect::{SimError, TopologyModel};
use crate::layout::{BoundingBox, LayoutError, SelectionChange, Selections};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ProjectError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("corrupt project file: {0}")]
    Corrupt(String),
    #[error("project schema {found} is not supported (expected {SCHEMA_VERSION})")]
    Version { found: u64 },
    #[error("program: {0}")]
    Frontend(#[from] FrontendError),
    #[error("object `{0}` communicates but has no hardware binding")]
    MissingBinding(String),
    #[error("hardware for `{object}`: {source}")]
    Hardware { object: String, source: HwError },
    #[error("binding for `{object}`: {source}")]
    Binding { object: String, source: BindingError },
    #[error("interconnect: {0}")]
    Sim(#[from] SimError),
    #[error("layout: {0}")]
    Layout(#[from] LayoutError),
    #[error("project has no template library")]
    NoTemplates,
}

/// Verdict remembered under a key that hashes every input of the check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CachedVerdict {
    pub outcome: Outcome,
    pub witness: Vec<String>,
    pub candidate: Option<usize>,
    pub folds: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Project {
    pub schema: u32,
    pub name: String,
    /// Source of the object program.
    pub program: String,
    /// Object name → FSM document, relative to the project file.
    pub bindings: BTreeMap<String, String>,
    /// Referenced file → sha256 at the last save.
    #[serde(default)]
    pub hashes: BTreeMap<String, String>,
    #[serde(default)]
    pub control_filter: BTreeSet<String>,
    pub topology: TopologyModel,
    /// Template manifest, relative to the project file.
    pub templates: Option<String>,
    #[serde(default)]
    pub selections: Selections,
    pub bbox: BoundingBox,
    pub spacing: f64,
    #[serde(default)]
    pub verdicts: BTreeMap<String, CachedVerdict>,
    /// Append-only log of variant swaps.
    #[serde(default)]
    pub history: Vec<SelectionChange>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub(crate) fn read(path: &Path) -> Result<String, ProjectError> {
    fs::read_to_string(path).map_err(|source| ProjectError::Io { path: path.to_path_buf(), source })
}

impl Project {
    /// Files the project refers to, relative to its directory.
    pub fn referenced_files(&self) -> BTreeSet<&str> {
        self.bindings.values().map(String::as_str).chain(self.templates.as_deref()).collect()
    }

    /// Recompute content hashes of every referenced file under `base`.
    pub fn refresh_hashes(&mut self, base: &Path) -> Result<(), ProjectError> {
        let mut hashes = BTreeMap::new();
        for rel in self.referenced_files() {
            hashes.insert(rel.to_string(), sha256_hex(read(&base.join(rel))?.as_bytes()));
        }
        self.hashes = hashes;
        Ok(())
    }

    /// Referenced files whose content no longer matches the stored hash.
    pub fn stale_files(&self, base: &Path) -> Vec<String> {
        self.referenced_files()
            .into_iter()
            .filter(|rel| {
                let now = read(&base.join(rel)).map(|t| sha256_hex(t.as_bytes())).ok();
                now.as_ref() != self.hashes.get(*rel)
            })
            .map(str::to_string)
            .collect()
    }

    /// Remember the verdicts of a finished run.
    pub fn record(&mut self, report: &PipelineReport) {
        for check in &report.checks {
            self.verdicts.insert(check.cache_key.clone(), check.to_cached());
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("projects always serialize");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Project, ProjectError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| ProjectError::Corrupt(e.to_string()))?;
        match value.get("schema").and_then(serde_json::Value::as_u64) {
            Some(v) if v == u64::from(SCHEMA_VERSION) => {}
            Some(found) => return Err(ProjectError::Version { found }),
            None => return Err(ProjectError::Corrupt("missing `schema`".into())),
        }
        serde_json::from_value(value).map_err(|e| ProjectError::Corrupt(e.to_string()))
    }
}

/// Write the project as pretty JSON; identical projects give identical bytes.
pub fn save_project(project: &Project, path: &Path) -> Result<(), ProjectError> {
    fs::write(path, project.to_json()).map_err(|source| ProjectError::Io { path: path.to_path_buf(), source })
}

pub fn load_project(path: &Path) -> Result<Project, ProjectError> {
    Project::from_json(&read(path)?)
}

/// Directory against which a project file's relative paths resolve.
pub fn base_dir(project_path: &Path) -> PathBuf {
    project_path.parent().map(Path::to_path_buf).unwrap_or_default()
}
