//! The offline stages: merge source files into raw edges, link names across
//! sources, and build the canonical graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::align::{link_entities, AlignError, LinkConfig, LinkTable};
use crate::graph::{edge_from_row, Graph, GraphError, ObjectKind, RelationType};
use crate::ingest::{
    parse_kgtk_edges, parse_ntriples, parse_wf_table, unquote_text, EdgeMerger, EdgeSource, IngestError, KgtkEdgeRow,
    ParseMode,
};

/// A named input document. The name only appears in error messages.
#[derive(Debug, Clone, Copy)]
pub struct SourceDoc<'a> {
    pub name: &'a str,
    pub text: &'a str,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IngestInputs<'a> {
    pub ntriples: &'a [SourceDoc<'a>],
    pub kgtk: &'a [SourceDoc<'a>],
    pub wf: &'a [SourceDoc<'a>],
}

impl IngestInputs<'_> {
    pub fn is_empty(&self) -> bool {
        self.ntriples.is_empty() && self.kgtk.is_empty() && self.wf.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{file}:{}: {error}", error.line())]
pub struct FileError {
    pub file: String,
    pub error: IngestError,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IngestReport {
    pub counts: BTreeMap<&'static str, usize>,
    /// Lines skipped in lenient mode.
    pub skipped: Vec<FileError>,
}

impl IngestReport {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }
}

impl fmt::Display for IngestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (source, n) in &self.counts {
            writeln!(f, "{source}\t{n}")?;
        }
        writeln!(f, "total\t{}", self.total())?;
        for e in &self.skipped {
            writeln!(f, "skipped\t{e}")?;
        }
        Ok(())
    }
}

/// Parses every input and merges the results into one KGTK edge list, N-Triples
/// first, then KGTK, then water-footprint tables. `mode` governs N-Triples
/// documents; the tabular formats are always strict.
pub fn ingest(inputs: IngestInputs<'_>, mode: ParseMode) -> Result<(Vec<KgtkEdgeRow>, IngestReport), FileError> {
    let wrap = |doc: &SourceDoc<'_>| {
        let file = doc.name.to_string();
        move |error| FileError { file: file.clone(), error }
    };
    let mut merger = EdgeMerger::new();
    let mut report = IngestReport::default();
    for doc in inputs.ntriples {
        let parsed = parse_ntriples(doc.text, mode).map_err(wrap(doc))?;
        report.skipped.extend(parsed.errors.into_iter().map(wrap(doc)));
        merger.add_triples(&parsed.items);
    }
    for doc in inputs.kgtk {
        merger.add_kgtk(&parse_kgtk_edges(doc.text).map_err(wrap(doc))?);
    }
    for doc in inputs.wf {
        merger.add_wf(&parse_wf_table(doc.text).map_err(wrap(doc))?);
    }
    for source in EdgeSource::ALL {
        report.counts.insert(source.name(), merger.count(source));
    }
    Ok((merger.finish(), report))
}

fn is_node_object(label: &str) -> bool {
    RelationType::from_label(label).is_some_and(|r| r.object_kind() == ObjectKind::Node)
}

fn node_names(row: &KgtkEdgeRow) -> impl Iterator<Item = &str> {
    std::iter::once(row.node1.as_str()).chain(is_node_object(&row.label).then_some(row.node2.as_str()))
}

/// Links every node name in `rows` onto a canonical id.
///
/// Node ids asserted by the identifier-based sources (N-Triples and KGTK)
/// form the canonical set, named by their `has_label` text where present.
/// Names from every source, including free-text water-footprint names, then
/// go through the exact / normalized / embedding cascade.
pub fn align_edges(rows: &[KgtkEdgeRow], config: LinkConfig) -> Result<LinkTable, AlignError> {
    let mut per_source: BTreeMap<Option<EdgeSource>, BTreeSet<&str>> = BTreeMap::new();
    let mut labels: BTreeMap<&str, String> = BTreeMap::new();
    for row in rows {
        let source = EdgeSource::of_edge_id(&row.id);
        per_source.entry(source).or_default().extend(node_names(row));
        if row.label == RelationType::HasLabel.label() && source != Some(EdgeSource::WaterFootprint) {
            let text = unquote_text(&row.node2).unwrap_or_else(|| row.node2.clone());
            labels.entry(row.node1.as_str()).or_insert(text);
        }
    }
    let canonical_ids: BTreeSet<&str> = per_source
        .iter()
        .filter(|(s, _)| **s != Some(EdgeSource::WaterFootprint))
        .flat_map(|(_, names)| names.iter().copied())
        .collect();
    let display: Vec<(&str, String)> = canonical_ids
        .iter()
        .map(|&id| (id, labels.get(id).cloned().unwrap_or_else(|| id.replace('_', " "))))
        .collect();
    let canonical: Vec<(&str, &str)> = display.iter().map(|(id, name)| (*id, name.as_str())).collect();
    link_entities(per_source.values().map(|names| names.iter().copied()), &canonical, config)
}

/// Rewrites node names in `rows` to their canonical ids. Names missing from
/// `links` are kept as they are.
pub fn apply_links(rows: &[KgtkEdgeRow], links: &LinkTable) -> Vec<KgtkEdgeRow> {
    let map = |name: &str| links.canonical_id(name).unwrap_or(name).to_string();
    rows.iter()
        .map(|r| KgtkEdgeRow {
            id: r.id.clone(),
            node1: map(&r.node1),
            label: r.label.clone(),
            node2: if is_node_object(&r.label) { map(&r.node2) } else { r.node2.clone() },
        })
        .collect()
}

/// Linked rows to a validated graph.
pub fn build_from_rows(rows: &[KgtkEdgeRow], links: &LinkTable) -> Result<Graph, GraphError> {
    let edges = apply_links(rows, links).iter().map(edge_from_row).collect::<Result<Vec<_>, _>>()?;
    Graph::build(edges)
}
