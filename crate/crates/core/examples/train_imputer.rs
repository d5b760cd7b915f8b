//! Trains the imputer on the desk snapshot with one footprint hidden, then
//! fills the gaps and prints what was imputed.
//!
//!     cargo run --release --example train_imputer [epochs]

use aquasub::graph::{load_snapshot, Graph, Provenance, RelationType};
use aquasub::imputer::{impute_missing, ImputerModel, TrainerConfig};

fn main() {
    let epochs = std::env::args().nth(1).map_or(200, |s| s.parse().expect("epochs"));
    let path = format!("{}/fixtures/desk/snapshot.tsv", env!("CARGO_MANIFEST_DIR"));
    let full = load_snapshot(&std::fs::read_to_string(path).unwrap()).unwrap();
    let hidden = full.measure("soy_cream", RelationType::HasWaterFootprint).unwrap().value;
    let g = Graph::build(
        full.edges()
            .iter()
            .filter(|e| !(e.subject == "soy_cream" && e.relation == RelationType::HasWaterFootprint))
            .cloned()
            .collect(),
    )
    .unwrap();

    let cfg = TrainerConfig { max_epochs: epochs, ..TrainerConfig::default() };
    let (model, curve) = ImputerModel::fit(&g, &cfg).unwrap();
    for (epoch, mse) in curve.iter().enumerate().step_by((epochs / 10).max(1)) {
        println!("epoch {epoch:>4}  mse {mse:.6}");
    }
    println!("epoch {:>4}  mse {:.6}", curve.len() - 1, curve[curve.len() - 1]);

    let filled = impute_missing(&g, &model).unwrap();
    println!();
    for e in filled.edges().iter().filter(|e| e.provenance == Provenance::Imputed) {
        println!("{:<16} {:<22} {:>10.3}", e.subject, e.relation.label(), e.value().unwrap());
    }
    println!("\nsoy_cream footprint: measured {hidden}, imputed {:.3}", filled.measure("soy_cream", RelationType::HasWaterFootprint).unwrap().value);
}
