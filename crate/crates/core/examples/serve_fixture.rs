//! Serves the desk snapshot. With `--once` it binds an ephemeral port, sends
//! one request to each endpoint, prints the responses and exits.
//!
//!     cargo run --example serve_fixture -- --once
//!     cargo run --example serve_fixture          # listens on 127.0.0.1:8080

use std::io::{Read, Write};
use std::sync::Arc;
use std::time::Duration;

use aquasub::service::{serve, AppState, ServiceConfig};

fn request(addr: std::net::SocketAddr, method: &str, path: &str, body: &str) -> String {
    let mut s = std::net::TcpStream::connect(addr).unwrap();
    write!(s, "{method} {path} HTTP/1.1\r\nHost: x\r\nConnection: close\r\nContent-Type: application/json\r\nContent-Length: {}\r\n\r\n{body}", body.len()).unwrap();
    let mut out = String::new();
    s.read_to_string(&mut out).unwrap();
    let (head, body) = out.split_once("\r\n\r\n").unwrap();
    format!("{} {}", head.lines().next().unwrap(), body)
}

#[tokio::main]
async fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/desk");
    let file = format!("snapshot = {dir}/snapshot.tsv\nlinks = {dir}/links.csv\n");
    let once = std::env::args().any(|a| a == "--once");
    let listen = if once { "127.0.0.1:0" } else { "127.0.0.1:8080" };
    let cfg = ServiceConfig::from_sources(Some(&file), [("AQUASUB_LISTEN".to_string(), listen.to_string())]).unwrap();
    let state = Arc::new(AppState::load(&cfg).unwrap());
    let listener = tokio::net::TcpListener::bind(cfg.listen).await.unwrap();
    let addr = listener.local_addr().unwrap();

    if !once {
        println!("http://{addr}/v1/stats");
        serve(listener, state, async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .unwrap();
        return;
    }

    let (tx, rx) = tokio::sync::oneshot::channel::<()>();
    let server = tokio::spawn(serve(listener, state, async {
        let _ = rx.await;
    }));
    let calls = [
        ("GET", "/v1/stats", ""),
        ("GET", "/v1/ingredients?q=soy", ""),
        ("GET", "/v1/ingredients/dairy_cream/substitutes", ""),
        ("POST", "/v1/recipes/analyze", r#"{"ingredients":["dairy_cream","sugar"]}"#),
        ("POST", "/v1/recipes/substitute", r#"{"ingredients":["dairy_cream","sugar"],"original":"dairy_cream","candidate":"oat_cream"}"#),
        ("GET", "/v1/ingredients/plant_cream/substitutes", ""),
    ];
    for (method, path, body) in calls {
        let resp = tokio::task::spawn_blocking(move || request(addr, method, path, body)).await.unwrap();
        println!("{method} {path}\n  {resp}\n");
    }
    let _ = tx.send(());
    tokio::time::timeout(Duration::from_secs(5), server).await.unwrap().unwrap().unwrap();
}
