//! Parsers for the three supported input formats and the merge step that
//! turns them into one KGTK edge list.

mod kgtk;
mod ntriples;
mod wf_table;

pub use kgtk::{parse_kgtk_edges, quote_text, unquote_text, write_kgtk_edges, KgtkEdgeRow, KGTK_HEADER};
pub use ntriples::{local_name, parse_ntriples, write_ntriples, Literal, Object, RawTriple, UNIT_DATATYPE_PREFIX};
pub use wf_table::{parse_wf_table, WfRecord, WF_HEADER};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IngestError {
    #[error("line {line}: malformed line: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("malformed header: expected {expected:?}, found {found:?}")]
    MalformedHeader { expected: &'static str, found: String },
    #[error("line {line}: duplicate edge id {id:?} (first seen on line {first})")]
    DuplicateEdgeId { id: String, line: usize, first: usize },
    #[error("line {line}: expected 4 columns, found {found}")]
    ColumnCount { line: usize, found: usize },
    #[error("line {line}: empty field")]
    EmptyField { line: usize },
    #[error("line {line}: negative water footprint")]
    NegativeValue { line: usize },
    #[error("line {line}: unparsable number {value:?}")]
    UnparsableNumber { line: usize, value: String },
}

impl IngestError {
    /// 1-based source line the error refers to (1 for header errors).
    pub fn line(&self) -> usize {
        match self {
            IngestError::MalformedHeader { .. } => 1,
            IngestError::MalformedLine { line, .. }
            | IngestError::DuplicateEdgeId { line, .. }
            | IngestError::ColumnCount { line, .. }
            | IngestError::EmptyField { line }
            | IngestError::NegativeValue { line }
            | IngestError::UnparsableNumber { line, .. } => *line,
        }
    }

    /// Shifts line numbers by `n`, for documents embedded after `n` preamble lines.
    pub fn offset_lines(mut self, n: usize) -> Self {
        match &mut self {
            IngestError::MalformedHeader { .. } => {}
            IngestError::DuplicateEdgeId { line, first, .. } => {
                *line += n;
                *first += n;
            }
            IngestError::MalformedLine { line, .. }
            | IngestError::ColumnCount { line, .. }
            | IngestError::EmptyField { line }
            | IngestError::NegativeValue { line }
            | IngestError::UnparsableNumber { line, .. } => *line += n,
        }
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ParseMode {
    /// Abort on the first malformed line.
    #[default]
    Strict,
    /// Skip malformed lines and collect their errors.
    Lenient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parsed<T> {
    pub items: Vec<T>,
    pub errors: Vec<IngestError>,
}

impl<T> Default for Parsed<T> {
    fn default() -> Self {
        Self { items: Vec::new(), errors: Vec::new() }
    }
}

/// Where a merged edge came from. Encoded as the edge id prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeSource {
    NTriples,
    Kgtk,
    WaterFootprint,
}

impl EdgeSource {
    pub const ALL: [EdgeSource; 3] = [EdgeSource::NTriples, EdgeSource::Kgtk, EdgeSource::WaterFootprint];

    pub fn prefix(self) -> &'static str {
        match self {
            EdgeSource::NTriples => "nt-",
            EdgeSource::Kgtk => "kg-",
            EdgeSource::WaterFootprint => "wf-",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EdgeSource::NTriples => "ntriples",
            EdgeSource::Kgtk => "kgtk",
            EdgeSource::WaterFootprint => "water_footprint",
        }
    }

    pub fn of_edge_id(id: &str) -> Option<EdgeSource> {
        Self::ALL.into_iter().find(|s| id.starts_with(s.prefix()))
    }
}

/// Maps a predicate IRI onto a relation label: local name, camelCase to
/// snake_case, plus the usual RDF vocabulary aliases.
pub fn relation_label(predicate: &str) -> String {
    let local = local_name(predicate);
    let mut snake = String::with_capacity(local.len() + 4);
    for (i, c) in local.chars().enumerate() {
        if c.is_uppercase() {
            if i > 0 {
                snake.push('_');
            }
            snake.extend(c.to_lowercase());
        } else {
            snake.push(c);
        }
    }
    match snake.as_str() {
        "sub_class_of" => "subclass_of".to_string(),
        "label" | "pref_label" => "has_label".to_string(),
        _ => snake,
    }
}

/// Accumulates edges from any number of input documents in call order and
/// assigns source-prefixed sequential edge ids.
#[derive(Debug, Default)]
pub struct EdgeMerger {
    rows: Vec<KgtkEdgeRow>,
    counts: [usize; 3],
}

impl EdgeMerger {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, source: EdgeSource, node1: String, label: String, node2: String) {
        let slot = source as usize;
        self.counts[slot] += 1;
        let id = format!("{}{}", source.prefix(), self.counts[slot]);
        self.rows.push(KgtkEdgeRow { id, node1, label, node2 });
    }

    pub fn add_triples(&mut self, triples: &[RawTriple]) {
        for t in triples {
            let node2 = match &t.object {
                Object::Iri(iri) => local_name(iri).to_string(),
                Object::Literal(Literal::Text(s)) => quote_text(s),
                Object::Literal(Literal::Number { value, datatype }) => match datatype.strip_prefix(UNIT_DATATYPE_PREFIX) {
                    Some(unit) => format!("{value}[{unit}]"),
                    None => value.to_string(),
                },
            };
            self.push(EdgeSource::NTriples, local_name(&t.subject).to_string(), relation_label(&t.predicate), node2);
        }
    }

    pub fn add_kgtk(&mut self, rows: &[KgtkEdgeRow]) {
        for r in rows {
            self.push(EdgeSource::Kgtk, r.node1.clone(), r.label.clone(), r.node2.clone());
        }
    }

    /// Water-footprint rows keep the raw source name as `node1`; alignment
    /// rewrites it to a canonical id later.
    pub fn add_wf(&mut self, records: &[WfRecord]) {
        for r in records {
            self.push(EdgeSource::WaterFootprint, r.name.clone(), "has_water_footprint".to_string(), r.wf_value.to_string());
        }
    }

    pub fn count(&self, source: EdgeSource) -> usize {
        self.counts[source as usize]
    }

    pub fn finish(self) -> Vec<KgtkEdgeRow> {
        self.rows
    }
}
