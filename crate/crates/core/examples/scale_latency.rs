//! Builds the 20,778-node synthetic graph, serves it on an ephemeral port and
//! reports latency percentiles for the substitutes endpoint.
//!
//!     cargo run --release --example scale_latency [requests]

use std::io::{Read, Write};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use aquasub::align::LinkTable;
use aquasub::graph::NodeKind;
use aquasub::service::{serve, AppState};
use aquasub::synth::{synthetic_graph, SynthConfig};

fn get(addr: std::net::SocketAddr, path: &str) -> u16 {
    let mut s = std::net::TcpStream::connect(addr).unwrap();
    write!(s, "GET {path} HTTP/1.1\r\nHost: x\r\nConnection: close\r\n\r\n").unwrap();
    let mut out = String::new();
    s.read_to_string(&mut out).unwrap();
    out.split_whitespace().nth(1).unwrap().parse().unwrap()
}

#[tokio::main]
async fn main() {
    let requests: usize = std::env::args().nth(1).map_or(1000, |s| s.parse().expect("request count"));
    let start = Instant::now();
    let g = synthetic_graph(&SynthConfig::default()).unwrap();
    let s = g.stats();
    println!("built {} nodes / {} relation types / {} edges in {:.2?}", s.node_count, s.relation_type_count, s.edge_count, start.elapsed());
    let ids: Vec<String> = g.nodes_of_kind(NodeKind::Ingredient).into_iter().map(str::to_string).collect();

    let state = Arc::new(AppState::new(g, LinkTable::default(), Duration::from_secs(1)));
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let (tx, rx) = tokio::sync::oneshot::channel::<()>();
    tokio::spawn(serve(listener, state, async {
        let _ = rx.await;
    }));

    let mut lat = tokio::task::spawn_blocking(move || {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        (0..requests)
            .map(|_| {
                let id = ids.choose(&mut rng).unwrap();
                let t = Instant::now();
                get(addr, &format!("/v1/ingredients/{id}/substitutes"));
                t.elapsed().as_secs_f64() * 1000.0
            })
            .collect::<Vec<f64>>()
    })
    .await
    .unwrap();
    let _ = tx.send(());

    lat.sort_by(f64::total_cmp);
    let pct = |p: f64| lat[((lat.len() - 1) as f64 * p).round() as usize];
    println!("{requests} requests: p50 {:.3} ms, p90 {:.3} ms, p99 {:.3} ms, max {:.3} ms", pct(0.5), pct(0.9), pct(0.99), pct(1.0));
}
