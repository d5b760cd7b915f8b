//! Parses the three desk source files, merges them into one KGTK edge list
//! and shows a strict vs lenient parse of a damaged N-Triples document.
//!
//!     cargo run --example ingest_formats

use aquasub::ingest::{parse_ntriples, parse_wf_table, write_kgtk_edges, ParseMode};
use aquasub::pipeline::{ingest, IngestInputs, SourceDoc};

fn desk(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/desk/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn main() {
    let (nt, kg, wf) = (desk("foods.nt"), desk("recipes.tsv"), desk("water_footprint.csv"));

    for r in parse_wf_table(&wf).unwrap().iter().take(3) {
        println!("line {}: {:?} -> {} m3/ton", r.line, r.name, r.wf_value);
    }

    let doc = |name, text| [SourceDoc { name, text }];
    let (a, b, c) = (doc("foods.nt", &nt), doc("recipes.tsv", &kg), doc("water_footprint.csv", &wf));
    let (rows, report) = ingest(IngestInputs { ntriples: &a, kgtk: &b, wf: &c }, ParseMode::Strict).unwrap();
    print!("\n{report}");
    let merged = write_kgtk_edges(&rows);
    println!("\nfirst merged rows:");
    for line in merged.lines().take(5) {
        println!("  {line}");
    }

    let damaged = "<food:a> <rdfs:subClassOf> <food:b> .\n<food:c> <nut:hasFat> \"1.5\"@en .\n<food:d> <rdfs:subClassOf> <food:b> .\n";
    match parse_ntriples(damaged, ParseMode::Strict) {
        Ok(_) => println!("\nstrict: accepted"),
        Err(e) => println!("\nstrict: {e}"),
    }
    let lenient = parse_ntriples(damaged, ParseMode::Lenient).unwrap();
    println!("lenient: {} triples kept, {} skipped", lenient.items.len(), lenient.errors.len());
}
