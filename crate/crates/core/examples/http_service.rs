// Drive the HTTP API in-process: read a project, swap a variant, run the
// check and fetch the floorplan.

use std::path::Path;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use objchip::project::load_project;
use objchip::service::{router, AppState};
use tower::ServiceExt;

async fn call(app: &axum::Router, method: &str, uri: &str, body: &str) -> Result<(StatusCode, String), Box<dyn std::error::Error>> {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json").body(Body::from(body.to_string()))?;
    let res = app.clone().oneshot(req).await?;
    let status = res.status();
    let bytes = res.into_body().collect().await?.to_bytes();
    Ok((status, String::from_utf8(bytes.to_vec())?))
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let project = load_project(&fixtures.join("ecg_project.json"))?;
    tokio::runtime::Runtime::new()?.block_on(async {
        let state = AppState::new();
        state.insert("ecg", project, fixtures, None).await;
        let app = router(state);
        for (method, uri, body) in [
            ("GET", "/api/projects/ecg", ""),
            ("POST", "/api/projects/ecg/opt_select", r#"{"ip":"ecg_analyzer","variant":"small"}"#),
            ("POST", "/api/projects/ecg/undo", ""),
            ("POST", "/api/projects/ecg/check", ""),
            ("GET", "/api/projects/ecg/floorplan.svg", ""),
        ] {
            let (status, text) = call(&app, method, uri, body).await?;
            let preview: String = text.chars().take(100).collect();
            println!("{method} {uri} -> {status} {preview}");
        }
        Ok(())
    })
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
