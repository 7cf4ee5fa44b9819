use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use http_body_util::BodyExt;
use phax_cli::service::{router, AppState, MAX_BODY};
use phax_core::fixtures;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(state: &AppState, method: Method, uri: &str, body: Option<String>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map(Body::from).unwrap_or_else(Body::empty))
        .unwrap();
    let resp = router(state.clone()).oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into()))
    };
    (status, value)
}

async fn create(state: &AppState, source: &str) -> String {
    let (status, body) = call(state, Method::POST, "/api/theory", Some(source.to_string())).await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    body["id"].as_str().unwrap().to_string()
}

fn conclusion<'a>(snapshot: &'a Value, lit: &str) -> &'a Value {
    &snapshot["conclusions"][lit]
}

#[tokio::test]
async fn create_accepts_raw_text_and_json_source() {
    let st = AppState::new();
    let (status, body) = call(&st, Method::POST, "/api/theory", Some(fixtures::SIMPLIFICATION.into())).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(body["name"], "simplification");
    assert_eq!(body["arguments"], 5);

    let wrapped = json!({ "source": fixtures::DUNG_EXAMPLE }).to_string();
    let (status, body) = call(&st, Method::POST, "/api/theory", Some(wrapped)).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(body["arguments"], 4);
    assert_eq!(st.session_count(), 2);
}

#[tokio::test]
async fn invalid_theory_reports_diagnostics_with_positions() {
    let st = AppState::new();
    let (status, body) = call(&st, Method::POST, "/api/theory", Some("theory t.\npremise p: a(.\n".into())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "INVALID_THEORY");
    let diag = &body["diagnostics"][0];
    assert_eq!(diag["pos"]["line"], 2);
    assert!(diag["message"].as_str().unwrap().len() > 3);
    assert_eq!(st.session_count(), 0);
}

#[tokio::test]
async fn oversized_body_is_rejected() {
    let st = AppState::new();
    let mut big = String::from("theory big.\n");
    while big.len() <= MAX_BODY {
        big.push_str("% padding padding padding padding padding padding padding\n");
    }
    let (status, body) = call(&st, Method::POST, "/api/theory", Some(big)).await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
    assert_eq!(body["code"], "PAYLOAD_TOO_LARGE");
}

#[tokio::test]
async fn unknown_session_and_route_are_json_404() {
    let st = AppState::new();
    let (status, body) = call(&st, Method::GET, "/api/theory/nope/arguments", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "UNKNOWN_SESSION");
    let (status, body) = call(&st, Method::GET, "/api/nothing", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "NOT_FOUND");
}

#[tokio::test]
async fn arguments_and_extensions() {
    let st = AppState::new();
    let id = create(&st, fixtures::DUNG_EXAMPLE).await;

    let (status, args) = call(&st, Method::GET, &format!("/api/theory/{id}/arguments"), None).await;
    assert_eq!(status, StatusCode::OK);
    let labels: Vec<&str> = args["arguments"].as_array().unwrap().iter().map(|a| a["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["A", "B", "C", "D"]);
    let attacks = args["attacks"].as_array().unwrap();
    assert!(attacks.iter().any(|a| a["attacker"] == "D" && a["attacked"] == "A" && a["defeat"] == true));
    assert!(attacks.iter().any(|a| a["attacker"] == "A" && a["attacked"] == "D" && a["defeat"] == false));

    let (status, ext) = call(&st, Method::GET, &format!("/api/theory/{id}/extensions?semantics=preferred"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ext["semantics"], "preferred");
    assert_eq!(ext["labellings"].as_array().unwrap().len(), 1);
    assert_eq!(ext["labellings"][0]["IN"], json!(["B", "C", "D"]));
    assert_eq!(ext["labellings"][0]["OUT"], json!(["A"]));
    assert_eq!(ext["labellings"][0]["summary"], "IN: B C D / OUT: A");

    let (status, body) = call(&st, Method::GET, &format!("/api/theory/{id}/extensions?semantics=ideal"), None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST, "{body}");
}

#[tokio::test]
async fn explain_returns_selection_and_rendering() {
    let st = AppState::new();
    let id = create(&st, fixtures::VACCINE).await;
    let req = json!({ "target": "prioritize(vaccine, group_a)", "profile": "clinician" }).to_string();
    let (status, body) = call(&st, Method::POST, &format!("/api/theory/{id}/explain"), Some(req)).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["band"], "professional");
    assert_eq!(body["acceptance"]["skeptical"], true);
    assert!((body["selection"]["sigma_full"].as_f64().unwrap() - 0.8245).abs() < 1e-9);
    assert_eq!(body["selection"]["nodes"][0]["role"], "proponent");
    let text = body["rendered"]["body"].as_str().unwrap();
    assert!(text.contains("Phase III trial data"), "{text}");

    let inline = json!({
        "target": "prioritize(vaccine, group_a)",
        "profile": { "name": "inline", "e": 0.05, "l": 0.5, "c": 0.5 },
        "format": "markdown",
    })
    .to_string();
    let (status, body) = call(&st, Method::POST, &format!("/api/theory/{id}/explain"), Some(inline)).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["band"], "lay");
    assert_eq!(body["rendered"]["format"], "markdown");
}

#[tokio::test]
async fn explain_domain_errors() {
    let st = AppState::new();
    let id = create(&st, fixtures::SIMPLIFICATION).await;
    let uri = format!("/api/theory/{id}/explain");

    let req = json!({ "target": "prefer(heart_attack)", "profile": "patient", "weights": { "tau": 0.9 } });
    let (status, body) = call(&st, Method::POST, &uri, Some(req.to_string())).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "INSUFFICIENT");

    let req = json!({ "target": "prefer(nothing)", "profile": "patient" });
    let (status, body) = call(&st, Method::POST, &uri, Some(req.to_string())).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "UNKNOWN_TARGET");

    let req = json!({ "target": "r1", "profile": "astronaut" });
    let (status, _) = call(&st, Method::POST, &uri, Some(req.to_string())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let (status, body) = call(&st, Method::POST, &uri, Some("{not json".into())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "BAD_REQUEST");
}

#[tokio::test]
async fn whatif_previews_unless_committed() {
    let st = AppState::new();
    let id = create(&st, fixtures::SIMPLIFICATION).await;
    let uri = format!("/api/theory/{id}/whatif");

    let req = json!({ "disable_premises": ["p3"] }).to_string();
    let (status, body) = call(&st, Method::POST, &uri, Some(req.clone())).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(conclusion(&body["before"], "prefer(heart_attack)")["skeptical"], false);
    assert_eq!(conclusion(&body["after"], "prefer(heart_attack)")["skeptical"], true);
    assert_eq!(body["committed"], false);
    assert!(body["delta"]["conclusions"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["key"] == "prefer(heart_attack)"));

    // The session is untouched by a preview, so the same request sees the same "before".
    let (_, again) = call(&st, Method::POST, &uri, Some(req)).await;
    assert_eq!(again["before"], body["before"]);

    let commit = json!({ "disable_premises": ["p3"], "commit": true }).to_string();
    let (status, _) = call(&st, Method::POST, &uri, Some(commit)).await;
    assert_eq!(status, StatusCode::OK);
    let (_, args) = call(&st, Method::GET, &format!("/api/theory/{id}/arguments"), None).await;
    let labels: Vec<&str> = args["arguments"].as_array().unwrap().iter().map(|a| a["label"].as_str().unwrap()).collect();
    assert!(!labels.contains(&"p3") && !labels.contains(&"r2"), "{labels:?}");

    let bad = json!({ "disable_premises": ["zzz"] }).to_string();
    let (status, _) = call(&st, Method::POST, &uri, Some(bad)).await;
    assert!(status.is_client_error());
}

#[tokio::test]
async fn whatif_preference_edits() {
    let st = AppState::new();
    let id = create(&st, fixtures::DUNG_EXAMPLE).await;
    let uri = format!("/api/theory/{id}/whatif");
    let req = json!({ "remove_preferences": [["D", "A"]], "add_preferences": [["A", "D"]] }).to_string();
    let (status, body) = call(&st, Method::POST, &uri, Some(req)).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["before"]["arguments"]["A"]["skeptical"], false);
    assert_eq!(body["after"]["arguments"]["A"]["skeptical"], true);
    assert_eq!(body["after"]["arguments"]["D"]["skeptical"], false);
}

#[tokio::test]
async fn challenge_posts_an_undercutter() {
    let st = AppState::new();
    let id = create(&st, fixtures::EXPERT_OPINION).await;

    let (_, args) = call(&st, Method::GET, &format!("/api/theory/{id}/arguments"), None).await;
    let inst = &args["scheme_instances"][0];
    assert_eq!(inst["scheme"], "expert_opinion");
    assert_eq!(inst["bindings"]["E"], "who");
    assert!(inst["critical_questions"].as_array().unwrap().iter().all(|q| q["posed"] == false));

    let instance = inst["rule_id"].as_str().unwrap();
    let req = json!({ "instance": instance, "cq": "bias" }).to_string();
    let (status, body) = call(&st, Method::POST, &format!("/api/theory/{id}/challenge"), Some(req)).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["question"], "Is who biased?");
    assert_eq!(conclusion(&body["before"], "believe(vaccinate_group)")["skeptical"], true);
    assert_eq!(conclusion(&body["after"], "believe(vaccinate_group)")["skeptical"], false);
    assert_eq!(body["committed"], true);

    let (_, args) = call(&st, Method::GET, &format!("/api/theory/{id}/arguments"), None).await;
    let posed: Vec<&Value> = args["scheme_instances"][0]["critical_questions"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|q| q["posed"] == true)
        .collect();
    assert_eq!(posed.len(), 1);
    assert_eq!(posed[0]["id"], "bias");
    assert!(args["attacks"].as_array().unwrap().iter().any(|a| a["kind"] == "undercut"));

    let req = json!({ "instance": instance, "cq": "astrology" }).to_string();
    let (status, body) = call(&st, Method::POST, &format!("/api/theory/{id}/challenge"), Some(req)).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "UNKNOWN_SCHEME");

    let req = json!({ "instance": "nobody", "cq": "bias" }).to_string();
    let (status, body) = call(&st, Method::POST, &format!("/api/theory/{id}/challenge"), Some(req)).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "UNKNOWN_INSTANCE");
}

#[tokio::test]
async fn schemes_catalog() {
    let (status, body) = call(&AppState::new(), Method::GET, "/api/schemes", None).await;
    assert_eq!(status, StatusCode::OK);
    let schemes = body.as_array().unwrap();
    assert_eq!(schemes.len(), 6);
    for s in schemes {
        assert!(!s["critical_questions"].as_array().unwrap().is_empty());
        assert_eq!(s["audience_templates"].as_object().unwrap().len(), 3);
    }
}

#[tokio::test]
async fn sessions_are_isolated_and_reads_are_pure() {
    let st = AppState::new();
    let a = create(&st, fixtures::SIMPLIFICATION).await;
    let b = create(&st, fixtures::SIMPLIFICATION).await;
    assert_ne!(a, b);
    let commit = json!({ "disable_premises": ["p3"], "commit": true }).to_string();
    call(&st, Method::POST, &format!("/api/theory/{a}/whatif"), Some(commit)).await;

    let (_, ea) = call(&st, Method::GET, &format!("/api/theory/{a}/extensions"), None).await;
    let (_, eb) = call(&st, Method::GET, &format!("/api/theory/{b}/extensions"), None).await;
    assert_eq!(ea["conclusions"]["prefer(heart_attack)"]["skeptical"], true);
    assert_eq!(eb["conclusions"]["prefer(heart_attack)"]["skeptical"], false);

    let req = json!({ "target": "prefer(heart_attack)", "profile": "clinician" }).to_string();
    let uri = format!("/api/theory/{a}/explain");
    let (_, first) = call(&st, Method::POST, &uri, Some(req.clone())).await;
    let (_, second) = call(&st, Method::POST, &uri, Some(req)).await;
    assert_eq!(first, second);
}

#[tokio::test]
async fn state_dir_survives_restart() {
    let dir = tempfile::tempdir().unwrap();
    let st = AppState::with_state_dir(dir.path()).unwrap();
    let id = create(&st, fixtures::SIMPLIFICATION).await;
    let commit = json!({ "disable_premises": ["p3"], "commit": true }).to_string();
    call(&st, Method::POST, &format!("/api/theory/{id}/whatif"), Some(commit)).await;
    drop(st);

    let restored = AppState::with_state_dir(dir.path()).unwrap();
    assert_eq!(restored.session_count(), 1);
    let (status, ext) = call(&restored, Method::GET, &format!("/api/theory/{id}/extensions"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ext["conclusions"]["prefer(heart_attack)"]["skeptical"], true);
}
