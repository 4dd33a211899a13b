//! Many clients on one server, each driving its own session. Whatever the
//! interleaving, every session must end as it does when played alone.

use std::sync::Arc;

use serde_json::{json, Value};

use clarena::api::{router, AppState};
use clarena::session::{HumanRole, Session, SessionSpec};

const CLIENTS: usize = 24;

/// A formula and a list of environment moves; illegal ones are part of the
/// script and must be rejected the same way every time.
fn script(client: usize) -> (&'static str, Vec<&'static str>) {
    let cases: [(&str, Vec<&str>); 4] = [
        ("(P + Q) -> (P |> Q)", vec!["1.2", "2.§", "1.1"]),
        ("(P * Q) -> (Q * P)", vec!["2.2", "1.9", "1.1", "2.1"]),
        ("(P & Q) | (~P &> ~R) | (~Q &> ~S) | (R + S)", vec!["1.1.1", "4.2", "1.2.2", "4.1", "2.§"]),
        ("P | ~P", vec!["1.2", "1.2.1", "2.1"]),
    ];
    let (f, moves) = &cases[client % cases.len()];
    (f, moves.clone())
}

/// The state after each scripted move when the session runs alone, without
/// the id.
fn reference(client: usize) -> Vec<Value> {
    let (formula, moves) = script(client);
    let spec = SessionSpec { formula: formula.into(), interpretation: None, human_role: HumanRole::Environment };
    let mut s = Session::create("ref".into(), &spec).unwrap();
    let mut out = vec![strip(serde_json::to_value(s.state()).unwrap())];
    for m in moves {
        let ok = s.apply_human(m).is_ok();
        let mut v = strip(serde_json::to_value(s.state()).unwrap());
        v["accepted"] = json!(ok);
        out.push(v);
    }
    out
}

fn strip(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("id");
    v
}

async fn drive(http: reqwest::Client, base: String, client: usize) -> Vec<Value> {
    let (formula, moves) = script(client);
    let created: Value = http
        .post(format!("{base}/api/sessions"))
        .json(&json!({ "formula": formula, "humanRole": "environment" }))
        .send()
        .await
        .unwrap()
        .json()
        .await
        .unwrap();
    let id = created["id"].as_str().unwrap().to_string();
    let mut out = vec![strip(created["state"].clone())];
    for m in moves {
        tokio::task::yield_now().await;
        let response =
            http.post(format!("{base}/api/sessions/{id}/moves")).json(&json!({ "move": m })).send().await.unwrap();
        let ok = response.status().is_success();
        let state: Value = http.get(format!("{base}/api/sessions/{id}")).send().await.unwrap().json().await.unwrap();
        let mut v = strip(state);
        v["accepted"] = json!(ok);
        out.push(v);
    }
    out
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn parallel_clients_do_not_interfere() {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let base = format!("http://{}", listener.local_addr().unwrap());
    tokio::spawn(async move { axum::serve(listener, router(Arc::new(AppState::new()))).await.unwrap() });

    let http = reqwest::Client::new();
    let tasks: Vec<_> =
        (0..CLIENTS).map(|c| tokio::spawn(drive(http.clone(), base.clone(), c))).collect();
    for (client, task) in tasks.into_iter().enumerate() {
        let got = task.await.unwrap();
        assert!(got.iter().any(|v| v["accepted"] == true), "client {client} made no move");
        assert_eq!(got, reference(client), "client {client}");
    }
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn one_session_many_writers() {
    // racing moves on one session: each is applied whole or rejected whole
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let base = format!("http://{}", listener.local_addr().unwrap());
    tokio::spawn(async move { axum::serve(listener, router(Arc::new(AppState::new()))).await.unwrap() });
    let http = reqwest::Client::new();
    let created: Value = http
        .post(format!("{base}/api/sessions"))
        .json(&json!({ "formula": "(P + Q) -> (P |> Q)", "humanRole": "environment" }))
        .send()
        .await
        .unwrap()
        .json()
        .await
        .unwrap();
    let id = created["id"].as_str().unwrap().to_string();
    let tasks: Vec<_> = (0..8)
        .map(|k| {
            let (http, url) = (http.clone(), format!("{base}/api/sessions/{id}/moves"));
            let m = if k % 2 == 0 { "1.1" } else { "1.2" };
            tokio::spawn(async move { http.post(url).json(&json!({ "move": m })).send().await.unwrap().status() })
        })
        .collect();
    let mut accepted = 0;
    for t in tasks {
        if t.await.unwrap().is_success() {
            accepted += 1;
        }
    }
    assert_eq!(accepted, 1);
    let state: Value = http.get(format!("{base}/api/sessions/{id}")).send().await.unwrap().json().await.unwrap();
    // the one choice, and the machine's switch if Q was chosen
    let expected = match state["run"][0]["m"].as_str() {
        Some("1.1") => json!([{ "by": "B", "m": "1.1" }]),
        _ => json!([{ "by": "B", "m": "1.2" }, { "by": "T", "m": "2.§" }]),
    };
    assert_eq!(state["run"], expected);
}
