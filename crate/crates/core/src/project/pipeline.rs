use std::collections::BTreeSet;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{read, sha256_hex, CachedVerdict, Project, ProjectError};
use crate::equiv::{check_binding, Outcome};
use crate::frontend::{event_labels, object_session, parse_program, validate_constraints, ConstraintViolation, ObjectGraph};
use crate::hw::{candidates_from_text, HwError};
use crate::interconnect::{simulate, SimReport, Transaction, Workload};
use crate::layout::{compose, load_templates, metrics, Floorplan, PlanMetrics};
use crate::session::WidthPolicy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineStatus {
    Ok,
    ConstraintViolation,
    ProtocolViolation,
}

/// Verdict for one bound object: its whole software-side behavior against
/// the candidates of its FSM.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectCheck {
    pub object: String,
    pub ip: String,
    pub partners: Vec<String>,
    pub software: String,
    pub outcome: Outcome,
    pub witness: Vec<String>,
    pub candidate: Option<usize>,
    pub folds: usize,
    pub cached: bool,
    pub cache_key: String,
    /// Wall-clock time of the check; zero when served from the cache.
    pub check_us: u64,
}

impl ObjectCheck {
    pub(crate) fn to_cached(&self) -> CachedVerdict {
        CachedVerdict { outcome: self.outcome, witness: self.witness.clone(), candidate: self.candidate, folds: self.folds }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub status: PipelineStatus,
    pub violations: Vec<ConstraintViolation>,
    pub checks: Vec<ObjectCheck>,
    pub interconnect: Option<SimReport>,
    pub floorplan: Option<Floorplan>,
    pub metrics: Option<PlanMetrics>,
}

impl PipelineReport {
    /// 0 when every check passed and the floorplan fits, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        let fits = self.floorplan.as_ref().is_some_and(|f| f.fit);
        if self.status == PipelineStatus::Ok && fits {
            0
        } else {
            1
        }
    }

    /// Copy with timing and cache provenance cleared, for comparisons.
    pub fn without_timing(&self) -> PipelineReport {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.check_us = 0;
            c.cached = false;
        }
        r
    }
}

fn partners(graph: &ObjectGraph, object: &str) -> Vec<String> {
    let set: BTreeSet<&str> = graph
        .edges
        .iter()
        .filter_map(|e| match (e.caller == object, e.callee == object) {
            (true, _) => Some(e.callee.as_str()),
            (_, true) => Some(e.caller.as_str()),
            _ => None,
        })
        .collect();
    set.into_iter().map(str::to_string).collect()
}

/// Traffic of the program as one sequential session over its objects.
pub fn program_workload(graph: &ObjectGraph, policy: &WidthPolicy) -> Result<Workload, ProjectError> {
    let index = |name: &str| graph.objects.iter().position(|o| o.name == name).expect("edges reference objects");
    let labels = event_labels(graph, policy)?;
    let mut transactions = Vec::with_capacity(graph.events.len());
    for (ev, label) in graph.events.iter().zip(&labels) {
        let edge = &graph.edges[ev.edge];
        let (src, dst) = if ev.response { (&edge.callee, &edge.caller) } else { (&edge.caller, &edge.callee) };
        let bits = u64::from(label.width().expect("concrete").max(1));
        transactions.push(Transaction { src: index(src), dst: index(dst), bits, compute: 0, session: 0 });
    }
    let mut node_names: Vec<String> = graph.objects.iter().map(|o| o.name.clone()).collect();
    while node_names.len() < 2 {
        node_names.push(format!("idle{}", node_names.len()));
    }
    Ok(Workload { node_names, transactions, after: Vec::new() })
}

/// Simulate the project's program traffic on its configured topology.
pub fn simulate_project(project: &Project) -> Result<SimReport, ProjectError> {
    let graph = parse_program(&project.program)?;
    let workload = program_workload(&graph, &WidthPolicy::default())?;
    let topology = project.topology.with_nodes(project.topology.nodes.max(workload.nodes()));
    Ok(simulate(&topology, &workload)?)
}

/// Run every stage. Layout only happens when all bound objects are
/// equivalent to their hardware; otherwise the report carries the witnesses.
pub fn run_pipeline(project: &Project, base: &Path) -> Result<PipelineReport, ProjectError> {
    let graph = parse_program(&project.program)?;
    let violations = validate_constraints(&graph, &project.program);
    if !violations.is_empty() {
        return Ok(PipelineReport {
            status: PipelineStatus::ConstraintViolation,
            violations,
            checks: Vec::new(),
            interconnect: None,
            floorplan: None,
            metrics: None,
        });
    }

    let policy = WidthPolicy::default();
    let filter: Vec<&str> = project.control_filter.iter().map(String::as_str).collect();
    let mut checks = Vec::new();
    for obj in &graph.objects {
        let Some(software) = object_session(&graph, &obj.name, &policy)? else {
            continue;
        };
        let rel = project.bindings.get(&obj.name).ok_or_else(|| ProjectError::MissingBinding(obj.name.clone()))?;
        let text = read(&base.join(rel))?;
        let hw_err = |source: HwError| ProjectError::Hardware { object: obj.name.clone(), source };
        let candidates = candidates_from_text(&text).map_err(hw_err)?;
        let ip = candidates.first().map(|c| c.ip.clone()).unwrap_or_default();
        let key = sha256_hex(format!("{}\n{}\n{}", software.to_json(), sha256_hex(text.as_bytes()), filter.join(",")).as_bytes());

        let (verdict, cached, check_us) = match project.verdicts.get(&key) {
            Some(hit) => (hit.clone(), true, 0),
            None => {
                let started = Instant::now();
                let v = check_binding(&software, &candidates, &project.control_filter)
                    .map_err(|source| ProjectError::Binding { object: obj.name.clone(), source })?;
                let elapsed = started.elapsed().as_micros() as u64;
                let record = CachedVerdict { outcome: v.outcome, witness: v.witness_strings(), candidate: v.candidate, folds: v.folds };
                (record, false, elapsed)
            }
        };
        log::debug!("{} bound to {}: {:?}", obj.name, ip, verdict.outcome);
        checks.push(ObjectCheck {
            object: obj.name.clone(),
            ip,
            partners: partners(&graph, &obj.name),
            software: software.to_string(),
            outcome: verdict.outcome,
            witness: verdict.witness,
            candidate: verdict.candidate,
            folds: verdict.folds,
            cached,
            cache_key: key,
            check_us,
        });
    }

    if checks.iter().any(|c| !c.outcome.is_equivalent()) {
        return Ok(PipelineReport {
            status: PipelineStatus::ProtocolViolation,
            violations,
            checks,
            interconnect: None,
            floorplan: None,
            metrics: None,
        });
    }

    let sim = simulate_project(project)?;

    let manifest = project.templates.as_deref().ok_or(ProjectError::NoTemplates)?;
    let library = load_templates(&read(&base.join(manifest))?)?;
    let plan = compose(&library, &project.selections, project.bbox, project.spacing)?;
    let m = metrics(&library, &plan);
    Ok(PipelineReport {
        status: PipelineStatus::Ok,
        violations,
        checks,
        interconnect: Some(sim),
        floorplan: Some(plan),
        metrics: Some(m),
    })
}
