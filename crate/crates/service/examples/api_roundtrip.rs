//! Drives the HTTP router in process: match, suggest, save, conflict.

use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use snacs_hi::corpus::DocumentStore;
use snacs_hi::Toolkit;
use snacs_hi_service::{router, AppState};

async fn send(app: &Router, method: Method, path: &str, body: Value) -> (u16, Value) {
    let req = Request::builder()
        .method(method)
        .uri(path)
        .header("content-type", "application/json")
        .body(Body::from(if body.is_null() { String::new() } else { body.to_string() }))
        .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status().as_u16();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap())
}

#[tokio::main]
async fn main() {
    let dir = tempfile::tempdir().unwrap();
    let app = router(Arc::new(AppState {
        toolkit: Toolkit::builtin().unwrap(),
        store: DocumentStore::open(dir.path()).unwrap(),
    }));

    let text = "sītā ne rām ko kitāb dī";
    let (_, matched) = send(&app, Method::POST, "/match", json!({"id": "s1", "text": text})).await;
    println!("POST /match -> {}", matched["targets"]);

    let (_, suggested) = send(&app, Method::POST, "/suggest", json!({"lemma": "ko"})).await;
    for c in suggested["candidates"].as_array().unwrap().iter().take(3) {
        println!("  ko: {} §{}", c["construal"], c["anchor"].as_str().unwrap());
    }

    let targets = matched["targets"].as_array().unwrap();
    let labels = ["Agent", "Recipient"];
    let records: Vec<Value> = targets
        .iter()
        .zip(labels)
        .map(|(t, label)| {
            json!({"sentence_id": "s1", "target": t, "construal": label, "annotator": "demo", "status": "draft"})
        })
        .collect();
    let document = json!({
        "id": "demo",
        "sentences": [{"id": "s1", "tokens": matched["tokens"]}],
        "records": records,
    });

    let (status, saved) = send(&app, Method::PUT, "/documents/demo", json!({"version": 0, "document": document})).await;
    println!("PUT v0 -> {status}, now version {}", saved["version"]);
    let (status, err) = send(&app, Method::PUT, "/documents/demo", json!({"version": 0, "document": document})).await;
    println!("PUT v0 again -> {status} {}", err["code"]);

    let mut bad = document.clone();
    bad["records"][1]["construal"] = json!("Instrument");
    let (status, err) = send(&app, Method::PUT, "/documents/demo", json!({"version": 1, "document": bad})).await;
    println!("PUT unlicensed -> {status} {}: {}", err["code"], err["message"]);

    let (_, stats) = send(&app, Method::GET, "/stats", Value::Null).await;
    println!("GET /stats -> {} records, per function {}", stats["records"], stats["per_function"]);
}
