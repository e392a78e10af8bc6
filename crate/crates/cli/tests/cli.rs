use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use futures::StreamExt;
use helgraph::export::{export_bundle, CONFIG_FILE, CORE_FILE, DATA_FILE};
use helgraph::server::{router, AppState, ServerOptions};
use helgraph_core::config::EngineConfig;
use helgraph_core::synthetic::{generate, SyntheticParams};
use helgraph_core::{interchange, EntityGraph};
use serde_json::{json, Value};

const BIN: &str = env!("CARGO_BIN_EXE_helgraph");

fn graph(projects: u32) -> EntityGraph {
    generate(&SyntheticParams { project_count: projects, ..Default::default() }).unwrap()
}

fn quick() -> EngineConfig {
    let mut c = EngineConfig::default();
    c.layout.force.max_iterations = 50;
    c
}

async fn start(graph: EntityGraph, config: EngineConfig, options: ServerOptions) -> String {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let app = router(AppState::new(graph, config, options));
    tokio::spawn(async move { axum::serve(listener, app).await.unwrap() });
    format!("http://{addr}")
}

async fn get(url: &str) -> (u16, Value) {
    let r = reqwest::get(url).await.unwrap();
    let status = r.status().as_u16();
    (status, serde_json::from_str(&r.text().await.unwrap()).unwrap())
}

async fn send(method: reqwest::Method, url: &str, body: Value) -> (u16, Value) {
    let r = reqwest::Client::new().request(method, url).body(body.to_string()).send().await.unwrap();
    let status = r.status().as_u16();
    (status, serde_json::from_str(&r.text().await.unwrap()).unwrap())
}

async fn post(url: &str, body: Value) -> (u16, Value) {
    send(reqwest::Method::POST, url, body).await
}

#[tokio::test]
async fn session_endpoints() {
    let g = graph(3);
    let solution = g.id_at(g.roots()[0]).to_string();
    let project = g.id_at(g.children(g.roots()[0])[0]).to_string();
    let base = start(g, quick(), ServerOptions::default()).await;

    let (code, meta) = get(&format!("{base}/graph/meta")).await;
    assert_eq!(code, 200);
    assert_eq!(meta["kinds"]["project"], 3);

    let (code, node) = get(&format!("{base}/node/{project}")).await;
    assert_eq!(code, 200);
    assert_eq!(node["parent"], solution.as_str());
    assert_eq!(get(&format!("{base}/node/nope")).await.0, 404);

    let (code, st) = post(&format!("{base}/session/expand"), json!({ "id": project })).await;
    assert_eq!(code, 200);
    assert!(st["visible"].as_array().unwrap().len() > 4);
    assert_eq!(st["layoutRuns"], 2);

    let (code, st) = post(&format!("{base}/session/select"), json!({ "id": project })).await;
    assert_eq!((code, st["selection"].as_str()), (200, Some(project.as_str())));
    let (code, st) = post(&format!("{base}/session/move"), json!({ "id": project, "x": 5.0, "y": 6.0, "pin": true })).await;
    assert_eq!((code, st["layoutRuns"].as_u64()), (200, Some(3)));
    let (_, layout) = get(&format!("{base}/layout")).await;
    assert_eq!(layout["positions"][&project], json!([5.0, 6.0]));

    let (code, st) = post(&format!("{base}/session/collapse"), json!({ "id": project })).await;
    assert_eq!((code, st["visible"].as_array().unwrap().len()), (200, 4));
    assert_eq!(post(&format!("{base}/session/collapse"), json!({ "id": project })).await.0, 409);

    let (code, st) = post(&format!("{base}/session/preset"), json!({ "preset": "allTypes" })).await;
    assert_eq!((code, st["activePreset"].as_str()), (200, Some("allTypes")));
    assert_eq!(post(&format!("{base}/session/preset"), json!({ "preset": "zoom" })).await.0, 400);

    let (code, st) = post(&format!("{base}/session/remove"), json!({ "id": project })).await;
    assert_eq!(code, 200);
    assert!(!st["removed"].as_array().unwrap().is_empty());
    let r = reqwest::Client::new().post(format!("{base}/session/refresh")).send().await.unwrap();
    assert_eq!(r.status().as_u16(), 200);
    let st: Value = serde_json::from_str(&r.text().await.unwrap()).unwrap();
    assert!(st["removed"].as_array().unwrap().is_empty());

    let (code, st) = post(&format!("{base}/session/relation"), json!({ "relation": "typeOf", "visible": true })).await;
    assert_eq!((code, st["relationVisibility"]["typeOf"].as_bool()), (200, Some(true)));

    let (code, err) = post(&format!("{base}/session/teleport"), json!({})).await;
    assert_eq!((code, err["error"]["kind"].as_str()), (404, Some("UnknownOperation")));
    let (code, err) = post(&format!("{base}/session/expand"), json!({ "wrong": 1 })).await;
    assert_eq!((code, err["error"]["kind"].as_str()), (400, Some("BadRequest")));
}

#[tokio::test]
async fn filter_glyphs_and_config() {
    let g = graph(2);
    let project = g.id_at(g.children(g.roots()[0])[0]).to_string();
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("helgraph.toml");
    let options = ServerOptions { config_path: Some(config_path.clone()), ..Default::default() };
    let base = start(g, quick(), options).await;

    let q = json!({ "query": { "mode": "builder", "clauses": [{ "property": "kind", "operator": "equals", "value": "project" }] }, "mode": "highlight" });
    let (code, out) = post(&format!("{base}/filter"), q).await;
    assert_eq!(code, 200);
    assert_eq!(out["matches"].as_array().unwrap().len(), 2);
    assert_eq!(out["state"]["dimmed"].as_array().unwrap().len(), 1);
    let bad = json!({ "query": { "mode": "regex", "text": "(" } });
    let (code, err) = post(&format!("{base}/filter"), bad).await;
    assert_eq!((code, err["error"]["kind"].as_str()), (400, Some("InvalidQuery")));

    let (code, all) = get(&format!("{base}/glyphs")).await;
    assert_eq!((code, all.as_object().unwrap().len()), (200, 3));
    let (code, one) = get(&format!("{base}/glyphs?ids={project}")).await;
    assert_eq!(code, 200);
    assert_eq!(one[&project]["iconId"], "project");
    assert_eq!(get(&format!("{base}/glyphs?id=missing")).await.0, 404);

    let (code, mut cfg) = get(&format!("{base}/config")).await;
    assert_eq!(code, 200);
    cfg["glyph"]["scaling"] = json!("log");
    let (code, back) = send(reqwest::Method::PUT, &format!("{base}/config"), cfg).await;
    assert_eq!((code, back["glyph"]["scaling"].as_str()), (200, Some("log")));
    let saved = EngineConfig::load(&config_path).unwrap();
    assert_eq!(serde_json::to_value(&saved).unwrap(), back);
    let (code, _) = send(reqwest::Method::PUT, &format!("{base}/config"), json!({ "glyph": { "scaling": "cubic" } })).await;
    assert_eq!(code, 400);

    let r = reqwest::get(format!("{base}/")).await.unwrap();
    assert!(r.text().await.unwrap().contains(r#"data-mode="server""#));
    assert_eq!(reqwest::get(format!("{base}/assets/viewer.js")).await.unwrap().status().as_u16(), 200);
    let doc = reqwest::get(format!("{base}/graph")).await.unwrap().bytes().await.unwrap();
    assert_eq!(interchange::write(&interchange::parse(&doc).unwrap()), doc.to_vec());
}

/// Reads SSE events until `window` elapses, returning their data payloads.
async fn collect_events(url: &str, window: Duration) -> Vec<Value> {
    let r = reqwest::get(url).await.unwrap();
    assert_eq!(r.headers()["content-type"], "text/event-stream");
    let mut body = r.bytes_stream();
    let mut buf = String::new();
    let mut out = Vec::new();
    let deadline = tokio::time::Instant::now() + window;
    while let Ok(Some(chunk)) = tokio::time::timeout_at(deadline, body.next()).await {
        buf.push_str(std::str::from_utf8(&chunk.unwrap()).unwrap());
        while let Some(end) = buf.find("\n\n") {
            let event: String = buf.drain(..end + 2).collect();
            if let Some(data) = event.lines().find_map(|l| l.strip_prefix("data:")) {
                out.push(serde_json::from_str(data.trim()).unwrap());
            }
        }
    }
    out
}

#[tokio::test]
async fn layout_stream_is_rate_capped() {
    let mut config = EngineConfig::default();
    config.layout.force.traction_threshold = 0.0;
    config.layout.force.max_iterations = 400;
    let options = ServerOptions { max_rate: 5.0, ..Default::default() };
    let base = start(graph(30), config, options).await;

    let url = format!("{base}/layout/stream");
    let reader = tokio::spawn(async move { collect_events(&url, Duration::from_millis(1500)).await });
    tokio::time::sleep(Duration::from_millis(100)).await;
    let t = Instant::now();
    let (code, _) = post(&format!("{base}/session/preset"), json!({ "preset": "birdsEye" })).await;
    assert_eq!(code, 200);
    let busy = t.elapsed();
    let events = reader.await.unwrap();
    assert!(!events.is_empty());
    assert!(events[0]["positions"].is_object());
    // One immediate event, then at most one per 200 ms.
    assert!(events.len() <= 1 + (1500 / 200), "{} events", events.len());
    let last = events.last().unwrap();
    if busy < Duration::from_millis(1200) {
        assert!(last["positions"].as_object().unwrap().len() > 40, "final snapshot arrives");
    }
}

fn run(args: &[&str]) -> std::process::Output {
    let out = Command::new(BIN).args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn generate_then_export() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.helgraph.json");
    run(&["generate", "--seed", "7", "--projects", "3", "-o", p(&g)]);
    let bytes = std::fs::read(&g).unwrap();
    let parsed = interchange::parse(&bytes).unwrap();
    assert_eq!(parsed.entities().iter().filter(|e| e.kind.as_str() == "project").count(), 3);

    let a = dir.path().join("a");
    let b = dir.path().join("b");
    run(&["export", p(&g), "-o", p(&a)]);
    run(&["export", p(&g), "-o", p(&b)]);
    for rel in ["index.html", "assets/viewer.js", "assets/viewer.css", DATA_FILE, CONFIG_FILE, CORE_FILE] {
        let x = std::fs::read(a.join(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"));
        assert_eq!(x, std::fs::read(b.join(rel)).unwrap(), "{rel} differs between runs");
    }
    assert_eq!(std::fs::read(a.join(DATA_FILE)).unwrap(), bytes);
    let wasm = std::fs::read(a.join(CORE_FILE)).unwrap();
    assert_eq!(&wasm[..4], b"\0asm");
}

#[test]
fn export_module_override_and_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let g = graph(1);
    let with = export_bundle(&g, &EngineConfig::default(), &dir.path().join("x"), Some(b"\0asm-test")).unwrap();
    assert!(with.core_module);
    assert_eq!(std::fs::read(dir.path().join("x").join(CORE_FILE)).unwrap(), b"\0asm-test");
    let without = export_bundle(&g, &EngineConfig::default(), &dir.path().join("y"), Some(b"")).unwrap();
    assert!(!without.core_module);
    assert!(!dir.path().join("y").join(CORE_FILE).exists());
}

#[cfg(unix)]
#[test]
fn analyze_runs_the_extractor() {
    use std::os::unix::fs::PermissionsExt;
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("doc.json");
    std::fs::write(&doc, interchange::write(&graph(2))).unwrap();
    let script = dir.path().join("extract.sh");
    std::fs::write(&script, format!("#!/bin/sh\ntest -d \"$1\" && cat '{}'\n", doc.display())).unwrap();
    std::fs::set_permissions(&script, std::fs::Permissions::from_mode(0o755)).unwrap();
    let out = dir.path().join("out.helgraph.json");
    run(&["analyze", p(dir.path()), "--extractor", p(&script), "-o", p(&out)]);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&doc).unwrap());

    let failed = Command::new(BIN)
        .args(["analyze", p(&dir.path().join("missing")), "--extractor", p(&script), "-o", p(&out)])
        .output()
        .unwrap();
    assert!(!failed.status.success());
}

#[test]
fn bad_input_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{").unwrap();
    let out = Command::new(BIN).args(["export", p(&bad), "-o", p(dir.path())]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.json"));
    let out = Command::new(BIN).args(["generate", "--projects", "0", "-o", p(&bad)]).output().unwrap();
    assert!(!out.status.success());
}
