//! KGTK-style edge files: a header line followed by `id<TAB>node1<TAB>label<TAB>node2` rows.

use std::collections::HashMap;

use super::IngestError;

pub const KGTK_HEADER: &str = "id\tnode1\tlabel\tnode2";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KgtkEdgeRow {
    pub id: String,
    pub node1: String,
    pub label: String,
    pub node2: String,
}

impl KgtkEdgeRow {
    pub fn new(
        id: impl Into<String>,
        node1: impl Into<String>,
        label: impl Into<String>,
        node2: impl Into<String>,
    ) -> Self {
        Self { id: id.into(), node1: node1.into(), label: label.into(), node2: node2.into() }
    }
}

/// Parses an edge file. Accepts `\n` or `\r\n` line endings; blank lines after
/// the header are skipped.
pub fn parse_kgtk_edges(text: &str) -> Result<Vec<KgtkEdgeRow>, IngestError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end_matches('\r') == KGTK_HEADER => {}
        Some((_, header)) => {
            return Err(IngestError::MalformedHeader { expected: KGTK_HEADER, found: header.to_string() })
        }
        None => return Err(IngestError::MalformedHeader { expected: KGTK_HEADER, found: String::new() }),
    }

    let mut rows = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        if raw.is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        let [id, node1, label, node2] = fields[..] else {
            return Err(IngestError::ColumnCount { line, found: fields.len() });
        };
        if id.is_empty() || node1.is_empty() || label.is_empty() || node2.is_empty() {
            return Err(IngestError::EmptyField { line });
        }
        if let Some(first) = seen.insert(id.to_string(), line) {
            return Err(IngestError::DuplicateEdgeId { id: id.to_string(), line, first });
        }
        rows.push(KgtkEdgeRow::new(id, node1, label, node2));
    }
    Ok(rows)
}

/// Canonical edge-file output: header, one row per line, `\n` terminators.
pub fn write_kgtk_edges(rows: &[KgtkEdgeRow]) -> String {
    let mut out = String::with_capacity(32 * (rows.len() + 1));
    out.push_str(KGTK_HEADER);
    out.push('\n');
    for r in rows {
        for (i, field) in [&r.id, &r.node1, &r.label, &r.node2].into_iter().enumerate() {
            if i > 0 {
                out.push('\t');
            }
            out.push_str(field);
        }
        out.push('\n');
    }
    out
}

/// Encodes a string literal for a `node2` cell: double-quoted with
/// `\"`, `\\`, `\t`, `\n` escapes.
pub fn quote_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Inverse of [`quote_text`]. Returns `None` when the cell is not a quoted string.
pub fn unquote_text(cell: &str) -> Option<String> {
    let inner = cell.strip_prefix('"')?.strip_suffix('"')?;
    let mut out = String::with_capacity(inner.len());
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next()? {
                '"' => out.push('"'),
                '\\' => out.push('\\'),
                't' => out.push('\t'),
                'n' => out.push('\n'),
                'r' => out.push('\r'),
                _ => return None,
            }
        } else if c == '"' {
            return None;
        } else {
            out.push(c);
        }
    }
    Some(out)
}
