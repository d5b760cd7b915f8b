mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::{desk_path, desk_text};

fn aquasub(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aquasub")).args(args).current_dir(dir).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn desk(name: &str) -> String {
    desk_path(name).display().to_string()
}

#[test]
fn pipeline_reproduces_committed_fixture_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (nt, kg, wf) = (desk("foods.nt"), desk("recipes.tsv"), desk("water_footprint.csv"));

    let o = aquasub(&["ingest", "--ntriples", &nt, "--kgtk", &kg, "--wf", &wf, "--out", "edges.tsv"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "kgtk\t8\nntriples\t28\nwater_footprint\t8\ntotal\t44\n");
    assert_eq!(std::fs::read_to_string(d.join("edges.tsv")).unwrap(), desk_text("edges.tsv"));

    let o = aquasub(&["align", "--edges", "edges.tsv", "--out-links", "links.csv"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "embedding\t1\nexact\t18\nnormalized\t4\ntotal\t23\n");
    assert_eq!(std::fs::read_to_string(d.join("links.csv")).unwrap(), desk_text("links.csv"));

    let o = aquasub(&["build", "--edges", "edges.tsv", "--links", "links.csv", "--out", "snapshot.tsv"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_to_string(d.join("snapshot.tsv")).unwrap(), desk_text("snapshot.tsv"));
}

#[test]
fn stats_text_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let snap = desk("snapshot.tsv");
    let o = aquasub(&["stats", "--snapshot", &snap], dir.path());
    assert_eq!(stdout(&o), "nodes\t17\nrelation_types\t7\nedges\t44\n");
    let o = aquasub(&["stats", "--snapshot", &snap, "--json"], dir.path());
    assert_eq!(stdout(&o), "{\"node_count\":17,\"relation_type_count\":7,\"edge_count\":44}\n");
}

#[test]
fn train_then_impute() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let snap = desk("snapshot.tsv");
    let o = aquasub(&["train", "--snapshot", &snap, "--out-model", "m.json", "--loss-curve", "c.csv", "--epochs", "10"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let curve = std::fs::read_to_string(d.join("c.csv")).unwrap();
    assert_eq!(curve.lines().count(), 1 + 11);

    let o = aquasub(&["impute", "--snapshot", &snap, "--model", "m.json", "--out", "imputed.tsv"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let imputed: usize = text.lines().next().unwrap().strip_prefix("imputed\t").unwrap().parse().unwrap();
    assert!(imputed > 0);
    let g = aquasub::graph::load_snapshot(&std::fs::read_to_string(d.join("imputed.tsv")).unwrap()).unwrap();
    let flagged = g.edges().iter().filter(|e| e.provenance == aquasub::graph::Provenance::Imputed).count();
    assert_eq!(flagged, imputed);
    // honey has no protein value in the fixture; its measured fat stays as it was.
    assert!(g.measure("honey", aquasub::graph::RelationType::HasProtein).is_some_and(|m| m.imputed()));
    assert!(g.measure("honey", aquasub::graph::RelationType::HasFat).is_some_and(|m| !m.imputed() && m.value == 0.0));
}

#[test]
fn recommend_single_ingredient() {
    let dir = tempfile::tempdir().unwrap();
    let o = aquasub(&["recommend", "--snapshot", &desk("snapshot.tsv"), "--ingredient", "coconut_cream"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    let ranked: Vec<&str> = text.lines().filter_map(|l| l.split_whitespace().nth(1)).filter(|c| c.ends_with("_cream")).collect();
    assert_eq!(ranked, ["oat_cream", "soy_cream"]);
}

#[test]
fn recipe_names_resolve_through_links() {
    let dir = tempfile::tempdir().unwrap();
    let o = aquasub(
        &["recommend", "--snapshot", &desk("snapshot.tsv"), "--links", &desk("links.csv"), "--recipe", "Dairy Cream (heavy),qqqq-unknown"],
        dir.path(),
    );
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("  dairy_cream "));
    assert!(text.contains("qqqq-unknown"));
    assert!(text.contains("unresolved"));
    assert!(text.contains("total water footprint: 4000.000 m3/ton"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(aquasub(&["--help"], d).status.code(), Some(0));
    assert_eq!(aquasub(&["--version"], d).status.code(), Some(0));
    // Usage errors.
    assert_eq!(aquasub(&[], d).status.code(), Some(2));
    assert_eq!(aquasub(&["frobnicate"], d).status.code(), Some(2));
    assert_eq!(aquasub(&["ingest", "--out", "x.tsv"], d).status.code(), Some(2));
    assert_eq!(aquasub(&["stats", "--snapshot", "missing.tsv"], d).status.code(), Some(2));
    assert_eq!(aquasub(&["align", "--edges", &desk("edges.tsv"), "--out-links", "l.csv", "--threshold", "1.5"], d).status.code(), Some(2));
    assert_eq!(aquasub(&["train", "--snapshot", &desk("snapshot.tsv"), "--out-model", "m.json", "--batch-size", "0"], d).status.code(), Some(2));

    // Runtime errors.
    std::fs::write(d.join("bad.nt"), "<a> <b> <c> .\n<a> <b> .\n").unwrap();
    let o = aquasub(&["ingest", "--ntriples", "bad.nt", "--out", "x.tsv"], d);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.nt:2"));
    assert!(!d.join("x.tsv").exists());
    let o = aquasub(&["recommend", "--snapshot", &desk("snapshot.tsv"), "--ingredient", "plant_cream"], d);
    assert_eq!(o.status.code(), Some(1));
    std::fs::write(d.join("junk.tsv"), "not a snapshot\n").unwrap();
    assert_eq!(aquasub(&["stats", "--snapshot", "junk.tsv"], d).status.code(), Some(1));
}

#[test]
fn lenient_ingest_skips_bad_triples() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("bad.nt"), "<a> <rdfs:subClassOf> <c> .\n<a> <b> .\n").unwrap();
    let o = aquasub(&["ingest", "--ntriples", "bad.nt", "--out", "x.tsv", "--lenient"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("skipped\tbad.nt:2: line 2"));
    assert_eq!(std::fs::read_to_string(d.join("x.tsv")).unwrap().lines().count(), 2);
}
