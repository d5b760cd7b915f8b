//! Loads the desk snapshot and walks the class tree around one ingredient.
//!
//!     cargo run --example ontology_queries [ingredient]

use aquasub::graph::{load_snapshot, NodeKind};

fn main() {
    let path = format!("{}/fixtures/desk/snapshot.tsv", env!("CARGO_MANIFEST_DIR"));
    let g = load_snapshot(&std::fs::read_to_string(path).unwrap()).unwrap();
    let id = std::env::args().nth(1).unwrap_or_else(|| "soy_cream".into());

    let s = g.stats();
    println!("{} nodes, {} relation types, {} edges", s.node_count, s.relation_type_count, s.edge_count);
    for kind in [NodeKind::OntologyClass, NodeKind::Ingredient, NodeKind::Recipe] {
        println!("{kind:?}: {}", g.nodes_of_kind(kind).join(", "));
    }

    let profile = match g.get_profile(&id) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    println!("\n{} ({})", profile.display_name, profile.id);
    println!("  ancestors: {}", g.ancestors(&id).unwrap().join(" > "));
    println!("  siblings:  {:?}", g.siblings(&id).unwrap());
    if let Some(wf) = profile.wf {
        println!("  water footprint: {} m3/ton ({:?})", wf.value, wf.provenance);
    }
    for (n, m) in &profile.nutrients {
        println!("  {}: {}", n.name(), m.value);
    }
}
