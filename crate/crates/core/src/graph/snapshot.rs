//! Graph snapshots: one stats header line followed by a KGTK edge file.
//!
//! ```text
//! # aquasub-snapshot v1 nodes=17 relation_types=7 edges=44
//! id	node1	label	node2
//! ...
//! ```
//!
//! `node2` cells are typed by the row's relation: numbers as `value` or
//! `value[unit]`, text as a quoted string, nodes as bare ids. Imputed edges are
//! recognised by the `imp-` id prefix.

use super::{Edge, EdgeObject, Graph, GraphError, GraphStats, ObjectKind, Provenance, RelationType, IMPUTED_ID_PREFIX};
use crate::ingest::{parse_kgtk_edges, quote_text, unquote_text, write_kgtk_edges, KgtkEdgeRow};

pub const SNAPSHOT_MAGIC: &str = "# aquasub-snapshot v1";

pub fn edge_from_row(row: &KgtkEdgeRow) -> Result<Edge, GraphError> {
    let relation = RelationType::from_label(&row.label)
        .ok_or_else(|| GraphError::UnknownRelationLabel { label: row.label.clone(), edge: row.id.clone() })?;
    let invalid = |reason: String| GraphError::InvalidEdge { edge: row.id.clone(), reason };
    let object = match relation.object_kind() {
        ObjectKind::Node => {
            if row.node2.starts_with('"') {
                return Err(invalid(format!("{relation} expects a node, got a string literal")));
            }
            EdgeObject::Node(row.node2.clone())
        }
        ObjectKind::Text => EdgeObject::Text(unquote_text(&row.node2).unwrap_or_else(|| row.node2.clone())),
        ObjectKind::Number => {
            let (number, unit) = match row.node2.strip_suffix(']').and_then(|s| s.split_once('[')) {
                Some((n, u)) => (n, Some(u.to_string())),
                None => (row.node2.as_str(), None),
            };
            let value: f64 = number
                .parse()
                .map_err(|_| invalid(format!("{relation} expects a number, got {:?}", row.node2)))?;
            EdgeObject::Number { value, unit }
        }
    };
    let provenance = if row.id.starts_with(IMPUTED_ID_PREFIX) { Provenance::Imputed } else { Provenance::Measured };
    Ok(Edge { id: row.id.clone(), subject: row.node1.clone(), relation, object, provenance })
}

pub fn edge_to_row(e: &Edge) -> KgtkEdgeRow {
    let node2 = match &e.object {
        EdgeObject::Node(n) => n.clone(),
        EdgeObject::Text(t) => quote_text(t),
        EdgeObject::Number { value, unit: Some(u) } => format!("{value}[{u}]"),
        EdgeObject::Number { value, unit: None } => value.to_string(),
    };
    KgtkEdgeRow { id: e.id.clone(), node1: e.subject.clone(), label: e.relation.label().to_string(), node2 }
}

pub fn save_snapshot(g: &Graph) -> String {
    let s = g.stats();
    let rows: Vec<KgtkEdgeRow> = g.edges().iter().map(edge_to_row).collect();
    format!(
        "{SNAPSHOT_MAGIC} nodes={} relation_types={} edges={}\n{}",
        s.node_count,
        s.relation_type_count,
        s.edge_count,
        write_kgtk_edges(&rows)
    )
}

/// Loads a snapshot, or a bare KGTK edge file when the stats header is absent.
pub fn load_snapshot(text: &str) -> Result<Graph, GraphError> {
    let (expected, body) = match text.strip_prefix(SNAPSHOT_MAGIC) {
        Some(rest) => {
            let (header, body) = rest.split_once('\n').unwrap_or((rest, ""));
            (Some(parse_stats(header)?), body)
        }
        None => (None, text),
    };
    let offset = usize::from(expected.is_some());
    let rows = parse_kgtk_edges(body).map_err(|e| e.offset_lines(offset))?;
    let edges = rows.iter().map(edge_from_row).collect::<Result<Vec<_>, _>>()?;
    let g = Graph::build(edges)?;
    if let Some(expected) = expected {
        if expected != g.stats() {
            return Err(GraphError::SnapshotMismatch { expected, actual: g.stats() });
        }
    }
    Ok(g)
}

fn parse_stats(header: &str) -> Result<GraphStats, GraphError> {
    let mut stats = GraphStats::default();
    let mut seen = 0;
    for field in header.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| GraphError::MalformedSnapshot(format!("bad header field {field:?}")))?;
        let value: usize = value
            .parse()
            .map_err(|_| GraphError::MalformedSnapshot(format!("bad header value {field:?}")))?;
        match key {
            "nodes" => stats.node_count = value,
            "relation_types" => stats.relation_type_count = value,
            "edges" => stats.edge_count = value,
            _ => return Err(GraphError::MalformedSnapshot(format!("unknown header key {key:?}"))),
        }
        seen += 1;
    }
    if seen != 3 {
        return Err(GraphError::MalformedSnapshot("header must carry nodes, relation_types and edges".into()));
    }
    Ok(stats)
}
