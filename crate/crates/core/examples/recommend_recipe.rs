//! Analyzes a recipe on the desk snapshot, applies the best swaps until none
//! is left and prints each delta report.
//!
//!     cargo run --example recommend_recipe [name ...]

use aquasub::align::LinkTable;
use aquasub::graph::load_snapshot;
use aquasub::recommend::{analyze_recipe, apply_substitution, Resolver};

fn desk(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/desk/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn main() {
    let g = load_snapshot(&desk("snapshot.tsv")).unwrap();
    let resolver = Resolver::new(&g, LinkTable::from_csv(&desk("links.csv")).unwrap());
    let mut names: Vec<String> = std::env::args().skip(1).collect();
    if names.is_empty() {
        names = ["Whipping Cream", "coconut creme", "honey"].map(String::from).to_vec();
    }

    let mut a = analyze_recipe(&g, &names, &resolver).unwrap();
    println!("members: {:?}, unresolved: {:?}", a.ids().collect::<Vec<_>>(), a.unresolved);
    println!("total: {:.3} m3/ton", a.total_wf);
    for (id, subs) in &a.options {
        let ranked: Vec<_> = subs.iter().map(|s| format!("{} ({:+.0})", s.candidate, s.wf_delta)).collect();
        println!("  {id}: {}", if ranked.is_empty() { "-".to_string() } else { ranked.join(", ") });
    }

    while let Some(best) = a.best_swap() {
        let (o, c) = (best.original.clone(), best.candidate.clone());
        let (next, report) = apply_substitution(&g, &a, &o, &c).unwrap();
        println!("\n{}", report.to_json());
        a = next;
    }
    println!("\nfinal total: {:.3} m3/ton", a.total_wf);
}
