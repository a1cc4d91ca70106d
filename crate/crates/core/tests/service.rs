use std::path::{Path, PathBuf};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use objchip::project::{load_project, save_project};
use objchip::service::{router, AppState};
use serde_json::Value;
use tower::ServiceExt;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

async fn app_with(name: &str) -> Router {
    let project = load_project(&fixtures().join(name)).unwrap();
    let state = AppState::new();
    state.insert("p", project, fixtures(), None).await;
    router(state)
}

async fn send(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Vec<u8>) {
    let body = body.map(|v| Body::from(v.to_string())).unwrap_or_else(Body::empty);
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json").body(body).unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    (status, res.into_body().collect().await.unwrap().to_bytes().to_vec())
}

async fn json(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let (status, bytes) = send(app, method, uri, body).await;
    (status, serde_json::from_slice(&bytes).unwrap())
}

fn select(ip: &str, variant: &str) -> Option<Value> {
    Some(serde_json::json!({ "ip": ip, "variant": variant }))
}

#[tokio::test]
async fn get_project_starts_at_revision_zero() {
    let app = app_with("ecg_project.json").await;
    let (status, body) = json(&app, "GET", "/api/projects/p", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["revision"], 0);
    assert_eq!(body["project"]["schema"], 1);
}

#[tokio::test]
async fn unknown_project_is_404() {
    let app = app_with("ecg_project.json").await;
    let (status, body) = json(&app, "GET", "/api/projects/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert!(body["error"].is_string());
}

#[tokio::test]
async fn opt_select_bumps_revision_and_returns_deltas() {
    let app = app_with("ecg_project.json").await;
    let (status, body) = json(&app, "POST", "/api/projects/p/opt_select", select("ecg_analyzer", "small")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["revision"], 1);
    assert_eq!(body["fit"], true);
    assert!(body["deltas"]["area"].as_f64().unwrap() < 0.0);

    let (_, after) = json(&app, "GET", "/api/projects/p", None).await;
    assert_eq!(after["revision"], 1);
    assert_eq!(after["project"]["selections"]["ecg_analyzer"], "small");
}

#[tokio::test]
async fn bad_variant_is_rejected_without_a_revision() {
    let app = app_with("ecg_project.json").await;
    let (status, _) = json(&app, "POST", "/api/projects/p/opt_select", select("ecg_analyzer", "nope")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (_, after) = json(&app, "GET", "/api/projects/p", None).await;
    assert_eq!(after["revision"], 0);
}

#[tokio::test]
async fn undo_restores_the_svg() {
    let app = app_with("ecg_project.json").await;
    let (_, before) = send(&app, "GET", "/api/projects/p/floorplan.svg", None).await;
    json(&app, "POST", "/api/projects/p/opt_select", select("ecg_analyzer", "tall")).await;
    let (_, changed) = send(&app, "GET", "/api/projects/p/floorplan.svg", None).await;
    assert_ne!(before, changed);
    let (status, body) = json(&app, "POST", "/api/projects/p/undo", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["revision"], 2);
    let (_, after) = send(&app, "GET", "/api/projects/p/floorplan.svg", None).await;
    assert_eq!(before, after);
}

#[tokio::test]
async fn undo_with_empty_history_is_an_error() {
    let app = app_with("ecg_project.json").await;
    let (status, _) = json(&app, "POST", "/api/projects/p/undo", None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_mutations_are_serialized() {
    let app = app_with("ecg_project.json").await;
    let variants = ["small", "tall", "fast"];
    let mut handles = Vec::new();
    for i in 0..24 {
        let app = app.clone();
        let v = variants[i % variants.len()];
        handles.push(tokio::spawn(async move {
            json(&app, "POST", "/api/projects/p/opt_select", select("ecg_analyzer", v)).await
        }));
    }
    let mut revisions = Vec::new();
    for h in handles {
        let (status, body) = h.await.unwrap();
        assert_eq!(status, StatusCode::OK);
        revisions.push(body["revision"].as_u64().unwrap());
    }
    revisions.sort_unstable();
    assert_eq!(revisions, (1..=24).collect::<Vec<_>>());
    let (_, after) = json(&app, "GET", "/api/projects/p", None).await;
    assert_eq!(after["revision"], 24);
    assert_eq!(after["project"]["history"].as_array().unwrap().len(), 24);
}

#[tokio::test]
async fn check_reports_ok_for_the_ecg_project() {
    let app = app_with("ecg_project.json").await;
    let (status, body) = json(&app, "POST", "/api/projects/p/check", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["report"]["status"], "ok");
    assert_eq!(body["report"]["floorplan"]["fit"], true);
    let (status, _) = send(&app, "GET", "/api/projects/p/floorplan.svg", None).await;
    assert_eq!(status, StatusCode::OK);
}

#[tokio::test]
async fn svg_is_withheld_after_a_protocol_violation() {
    let app = app_with("ecg_project_mutated.json").await;
    let (status, body) = json(&app, "POST", "/api/projects/p/check", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["report"]["status"], "protocol-violation");
    assert!(body["report"]["floorplan"].is_null());
    let (status, _) = send(&app, "GET", "/api/projects/p/floorplan.svg", None).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn templates_lists_every_ip() {
    let app = app_with("ecg_project.json").await;
    let (status, body) = json(&app, "GET", "/api/projects/p/templates", None).await;
    assert_eq!(status, StatusCode::OK);
    let ips: Vec<&str> = body.as_array().unwrap().iter().map(|e| e["ip"].as_str().unwrap()).collect();
    assert!(ips.contains(&"ecg_analyzer") && ips.contains(&"simulation_host"));
}

#[tokio::test]
async fn topology_switch_resimulates() {
    let app = app_with("ecg_project.json").await;
    let (status, bus) = json(&app, "POST", "/api/projects/p/topology", Some(serde_json::json!({ "params": {} }))).await;
    assert_eq!(status, StatusCode::OK);
    let (status, xbar) =
        json(&app, "POST", "/api/projects/p/topology", Some(serde_json::json!({ "kind": "crossbar", "params": { "width": 64 } }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(xbar["revision"], 2);
    assert!(xbar["report"]["total_cycles"].as_u64().unwrap() <= bus["report"]["total_cycles"].as_u64().unwrap());

    let (status, _) =
        json(&app, "POST", "/api/projects/p/topology", Some(serde_json::json!({ "params": { "width": 0 } }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (_, after) = json(&app, "GET", "/api/projects/p", None).await;
    assert_eq!(after["revision"], 2);
    assert_eq!(after["project"]["topology"]["width"], 64);
}

#[tokio::test]
async fn mutations_persist_to_the_project_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("ecg.json");
    let project = load_project(&fixtures().join("ecg_project.json")).unwrap();
    save_project(&project, &file).unwrap();

    let state = AppState::new();
    state.insert("p", project, fixtures(), Some(file.clone())).await;
    let app = router(state);
    json(&app, "POST", "/api/projects/p/opt_select", select("simulation_host", "wide")).await;
    let reloaded = load_project(&file).unwrap();
    assert_eq!(reloaded.selections["simulation_host"], "wide");
}
