mod common;

use std::time::Duration;

use aquasub::service::{AppState, ServiceConfig};
use serde_json::{json, Value};

use common::{desk_graph, desk_links, desk_path, TestServer};

fn server() -> TestServer {
    TestServer::start(AppState::new(desk_graph(), desk_links(), Duration::from_millis(1000)))
}

fn parse(body: &str) -> Value {
    serde_json::from_str(body).unwrap_or_else(|e| panic!("{e}: {body}"))
}

fn error_code(body: &str) -> String {
    parse(body)["error"]["code"].as_str().unwrap().to_string()
}

#[test]
fn stats() {
    let s = server();
    let (status, body) = s.get("/v1/stats");
    assert_eq!(status, 200);
    assert_eq!(body, r#"{"node_count":17,"relation_type_count":7,"edge_count":44}"#);
}

#[test]
fn search() {
    let s = server();
    let ids = |q: &str| -> Vec<String> {
        let (status, body) = s.get(&format!("/v1/ingredients?q={q}"));
        assert_eq!(status, 200);
        parse(&body).as_array().unwrap().iter().map(|h| h["id"].as_str().unwrap().to_string()).collect()
    };
    assert_eq!(ids("soy"), ["soy_cream"]);
    // Exact name first, then prefixes by id.
    assert_eq!(ids("sugar"), ["sugar"]);
    assert_eq!(ids("s"), ["soy_cream", "sugar"]);
    // Prefix matching only: a trailing word does not match.
    assert!(ids("cream").is_empty());
    // Normalized form: qualifiers and case are dropped.
    assert_eq!(ids("Organic%20OAT%20cream"), ["oat_cream"]);

    let (_, body) = s.get("/v1/ingredients?q=Maple%20Syrup");
    let hits = parse(&body);
    assert_eq!(hits[0]["id"], "maple_syrup");
    assert!(body.contains(r#""wf":1500.000"#));

    assert_eq!(s.get("/v1/ingredients?q=zzzz").1, "[]");
    let (status, body) = s.get("/v1/ingredients?q=%20");
    assert_eq!((status, error_code(&body).as_str()), (400, "empty_query"));
    assert_eq!(s.get("/v1/ingredients").0, 400);
}

#[test]
fn substitutes() {
    let s = server();
    let (status, body) = s.get("/v1/ingredients/dairy_cream/substitutes");
    assert_eq!(status, 200);
    let v = parse(&body);
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 2);
    assert_eq!(list[0]["rank"], 1);
    assert_eq!(list[0]["candidate"], "oat_cream");
    assert_eq!(list[1]["candidate"], "soy_cream");
    assert!(body.starts_with(r#"[{"rank":1,"original":"dairy_cream","candidate":"oat_cream","wf_before":4000.000,"wf_after":900.000,"wf_delta":-3100.000,"wf_imputed":false,"nutrients":["#));

    assert_eq!(s.get("/v1/ingredients/sugar/substitutes").1, "[]");
}

#[test]
fn substitute_errors() {
    let s = server();
    let cases = [
        ("/v1/ingredients/nope/substitutes", 404, "unknown_node"),
        ("/v1/ingredients/plant_cream/substitutes", 422, "not_an_ingredient"),
        ("/v1/v2/whatever", 404, "no_route"),
    ];
    for (path, status, code) in cases {
        let (got, body) = s.get(path);
        assert_eq!((got, error_code(&body)), (status, code.to_string()), "{path}");
    }
}

#[test]
fn analyze_and_substitute() {
    let s = server();
    let req = json!({"ingredients": ["dairy_cream", "sugar", "qqqq-unknown"]}).to_string();
    let (status, body) = s.post("/v1/recipes/analyze", &req);
    assert_eq!(status, 200);
    let v = parse(&body);
    assert!(body.contains(r#""total_wf":4180.000"#));
    assert_eq!(v["unresolved"], json!(["qqqq-unknown"]));
    assert_eq!(v["ingredients"][0]["id"], "dairy_cream");
    assert_eq!(v["options"]["dairy_cream"][0]["candidate"], "oat_cream");
    assert_eq!(v["options"]["sugar"], json!([]));

    let req = json!({"ingredients": ["dairy_cream", "sugar"], "original": "dairy_cream", "candidate": "oat_cream"}).to_string();
    let (status, body) = s.post("/v1/recipes/substitute", &req);
    assert_eq!(status, 200);
    assert!(body.starts_with(
        r#"{"original":"dairy_cream","candidate":"oat_cream","wf_before":4180.000,"wf_after":1080.000,"wf_delta":-3100.000,"wf_imputed":false,"nutrients":["#
    ));
    assert!(body.contains(r#"{"name":"fat","before":36.000,"after":12.800,"delta":-23.200,"imputed":false}"#));

    let req = json!({"ingredients": ["oat_cream", "sugar"], "original": "oat_cream", "candidate": "dairy_cream"}).to_string();
    let (status, body) = s.post("/v1/recipes/substitute", &req);
    assert_eq!((status, error_code(&body).as_str()), (409, "not_a_recommended_candidate"));

    let (status, body) = s.post("/v1/recipes/analyze", "{\"ingredients\": 3}");
    assert_eq!((status, error_code(&body).as_str()), (400, "malformed_body"));
    let (status, _) = s.post("/v1/recipes/substitute", "not json");
    assert_eq!(status, 400);
}

#[test]
fn identical_requests_give_identical_bytes() {
    let s = server();
    let req = json!({"ingredients": ["whipping cream", "honey"]}).to_string();
    let first = s.post("/v1/recipes/analyze", &req);
    assert_eq!(first.0, 200);
    for _ in 0..5 {
        assert_eq!(s.post("/v1/recipes/analyze", &req), first);
    }
}

#[test]
fn state_loads_from_config() {
    let file = format!(
        "snapshot = {}\nlinks = {}\nbudget_ms = 250\n",
        desk_path("snapshot.tsv").display(),
        desk_path("links.csv").display()
    );
    let cfg = ServiceConfig::from_sources(Some(&file), Vec::<(String, String)>::new()).unwrap();
    let state = AppState::load(&cfg).unwrap();
    assert_eq!(state.graph().stats().node_count, 17);

    let missing = ServiceConfig::from_sources(Some("snapshot = /nonexistent/snap.tsv\n"), Vec::<(String, String)>::new()).unwrap();
    assert!(AppState::load(&missing).is_err());
}
