//! Line-oriented N-Triples subset.
//!
//! Supported line forms:
//!
//! ```text
//! <iri> <iri> <iri> .
//! <iri> <iri> "literal" .
//! <iri> <iri> "literal"^^<datatype-iri> .
//! # comment
//! ```
//!
//! Blank nodes, language tags and multi-line literals are rejected.

use std::fmt::Write as _;

use super::{IngestError, ParseMode, Parsed};

/// Datatype local names that yield numeric literals.
const NUMERIC_DATATYPES: &[&str] = &[
    "decimal", "double", "float", "integer", "int", "long", "short",
    "nonNegativeInteger", "positiveInteger",
];

/// Datatype IRIs with this prefix are numeric and carry a unit tag,
/// e.g. `<unit:m3_per_ton>`.
pub const UNIT_DATATYPE_PREFIX: &str = "unit:";

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Text(String),
    Number { value: f64, datatype: String },
}

impl Literal {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            Literal::Number { value, .. } => Some(*value),
            Literal::Text(_) => None,
        }
    }

    pub fn unit(&self) -> Option<&str> {
        match self {
            Literal::Number { datatype, .. } => datatype.strip_prefix(UNIT_DATATYPE_PREFIX),
            Literal::Text(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Object {
    Iri(String),
    Literal(Literal),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawTriple {
    pub subject: String,
    pub predicate: String,
    pub object: Object,
    /// 1-based source line.
    pub line: usize,
}

pub fn parse_ntriples(text: &str, mode: ParseMode) -> Result<Parsed<RawTriple>, IngestError> {
    let mut out = Parsed::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        match parse_line(raw, line_no) {
            Ok(Some(t)) => out.items.push(t),
            Ok(None) => {}
            Err(e) => match mode {
                ParseMode::Strict => return Err(e),
                ParseMode::Lenient => out.errors.push(e),
            },
        }
    }
    Ok(out)
}

/// Serializes triples in canonical form: single spaces, ` .` terminator, `\n` line ends.
pub fn write_ntriples(triples: &[RawTriple]) -> String {
    let mut out = String::new();
    for t in triples {
        let _ = write!(out, "<{}> <{}> ", t.subject, t.predicate);
        match &t.object {
            Object::Iri(iri) => {
                let _ = write!(out, "<{iri}>");
            }
            Object::Literal(Literal::Text(s)) => {
                out.push('"');
                escape_into(&mut out, s);
                out.push('"');
            }
            Object::Literal(Literal::Number { value, datatype }) => {
                let _ = write!(out, "\"{value}\"^^<{datatype}>");
            }
        }
        out.push_str(" .\n");
    }
    out
}

fn escape_into(out: &mut String, s: &str) {
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, reason: impl Into<String>) -> IngestError {
        IngestError::MalformedLine { line: self.line, reason: reason.into() }
    }

    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start_matches([' ', '\t']);
        self.pos = self.s.len() - trimmed.len();
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    /// Requires at least one separator before the next term.
    fn separator(&mut self) -> Result<(), IngestError> {
        let before = self.pos;
        self.skip_ws();
        if self.pos == before {
            return Err(self.err("expected whitespace between terms"));
        }
        Ok(())
    }

    fn iri(&mut self, what: &str) -> Result<String, IngestError> {
        match self.peek() {
            Some('<') => {}
            Some('_') if self.rest().starts_with("_:") => {
                return Err(self.err("blank nodes are not supported"))
            }
            _ => return Err(self.err(format!("expected <iri> for {what}"))),
        }
        let body = &self.rest()[1..];
        let end = body
            .find('>')
            .ok_or_else(|| self.err(format!("unbalanced angle bracket in {what}")))?;
        let iri = &body[..end];
        if iri.is_empty() {
            return Err(self.err(format!("empty iri in {what}")));
        }
        if let Some(c) = iri.chars().find(|c| c.is_whitespace() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')) {
            return Err(self.err(format!("invalid character {c:?} in {what} iri")));
        }
        self.pos += end + 2;
        Ok(iri.to_string())
    }

    fn literal(&mut self) -> Result<Literal, IngestError> {
        // Opening quote already peeked.
        self.pos += 1;
        let mut value = String::new();
        let mut chars = self.rest().char_indices();
        let mut closed = None;
        while let Some((i, c)) = chars.next() {
            match c {
                '"' => {
                    closed = Some(i);
                    break;
                }
                '\\' => match chars.next() {
                    Some((_, '"')) => value.push('"'),
                    Some((_, '\\')) => value.push('\\'),
                    Some((_, 'n')) => value.push('\n'),
                    Some((_, 't')) => value.push('\t'),
                    Some((_, 'r')) => value.push('\r'),
                    Some((_, other)) => return Err(self.err(format!("unsupported escape \\{other}"))),
                    None => return Err(self.err("unbalanced quotes in literal")),
                },
                c => value.push(c),
            }
        }
        let end = closed.ok_or_else(|| self.err("unbalanced quotes in literal"))?;
        self.pos += end + 1;

        if self.rest().starts_with('@') {
            return Err(self.err("language tags are not supported"));
        }
        if self.rest().starts_with("^^") {
            self.pos += 2;
            let datatype = self.iri("datatype")?;
            let local = local_name(&datatype);
            let numeric = datatype.starts_with(UNIT_DATATYPE_PREFIX) || NUMERIC_DATATYPES.contains(&local);
            if numeric {
                let number: f64 = value
                    .trim()
                    .parse()
                    .map_err(|_| self.err(format!("unparsable number {value:?} for datatype {datatype}")))?;
                if !number.is_finite() {
                    return Err(self.err(format!("non-finite number {value:?}")));
                }
                return Ok(Literal::Number { value: number, datatype });
            }
            // Non-numeric datatypes (e.g. xsd:string) collapse to plain text.
        }
        Ok(Literal::Text(value))
    }
}

fn parse_line(raw: &str, line: usize) -> Result<Option<RawTriple>, IngestError> {
    let trimmed = raw.trim_matches([' ', '\t', '\r']);
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let mut cur = Cursor { s: trimmed, pos: 0, line };
    let subject = cur.iri("subject")?;
    cur.separator()?;
    let predicate = cur.iri("predicate")?;
    cur.separator()?;
    let object = match cur.peek() {
        Some('"') => Object::Literal(cur.literal()?),
        _ => Object::Iri(cur.iri("object")?),
    };
    cur.skip_ws();
    if cur.peek() != Some('.') {
        return Err(cur.err("missing terminal dot"));
    }
    cur.pos += 1;
    cur.skip_ws();
    let tail = cur.rest();
    if !tail.is_empty() && !tail.starts_with('#') {
        return Err(cur.err(format!("unexpected trailing content {tail:?}")));
    }
    Ok(Some(RawTriple { subject, predicate, object, line }))
}

/// Local part of an IRI or CURIE: the text after the last `#`, `/` or `:`.
pub fn local_name(iri: &str) -> &str {
    match iri.rfind(['#', '/', ':']) {
        Some(i) if i + 1 < iri.len() => &iri[i + 1..],
        _ => iri,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strict(text: &str) -> Result<Vec<RawTriple>, IngestError> {
        parse_ntriples(text, ParseMode::Strict).map(|p| p.items)
    }

    #[test]
    fn decimal_literal_line() {
        let t = strict("<i:butter> <p:hasFat> \"81.1\"^^<x:decimal> .").unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].subject, "i:butter");
        assert_eq!(t[0].predicate, "p:hasFat");
        assert_eq!(t[0].object, Object::Literal(Literal::Number { value: 81.1, datatype: "x:decimal".into() }));
        assert_eq!(t[0].line, 1);
    }

    #[test]
    fn comments_and_blanks_yield_nothing() {
        assert!(strict("# comment\n\n").unwrap().is_empty());
    }

    #[test]
    fn unescapes_strings() {
        let t = strict(r#"<a> <b> "say \"hi\"\\ \n\tend" ."#).unwrap();
        assert_eq!(t[0].object, Object::Literal(Literal::Text("say \"hi\"\\ \n\tend".into())));
    }

    #[test]
    fn unit_datatype_tags_number() {
        let t = strict("<i:x> <p:hasWaterFootprint> \"1200\"^^<unit:m3_per_ton> .").unwrap();
        let Object::Literal(lit) = &t[0].object else { panic!() };
        assert_eq!(lit.as_number(), Some(1200.0));
        assert_eq!(lit.unit(), Some("m3_per_ton"));
    }

    #[test]
    fn rejects_unsupported_forms() {
        let cases = [
            ("<a> <b> <c>", "terminal dot"),
            ("<a> <b> \"open .", "unbalanced quotes"),
            ("<a <b> <c> .", "invalid character"),
            ("<a> <b> <c .", "unbalanced angle"),
            ("_:b1 <b> <c> .", "blank nodes"),
            ("<a> <b> _:c .", "blank nodes"),
            ("<a> <b> \"x\"@en .", "language tags"),
            ("<a> <b> \"x\"^^<xsd:decimal> .", "unparsable number"),
            ("<a> <b> <c> . extra", "trailing"),
        ];
        for (line, want) in cases {
            match strict(line) {
                Err(IngestError::MalformedLine { line: 1, reason }) => {
                    assert!(reason.contains(want), "{line:?}: {reason}")
                }
                other => panic!("{line:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn lenient_collects_and_skips() {
        let text = "<a> <b> <c> .\n<a> <b>\n\n<d> <e> \"1\" .\n_:x <y> <z> .\n";
        let parsed = parse_ntriples(text, ParseMode::Lenient).unwrap();
        assert_eq!(parsed.items.len(), 2);
        let lines: Vec<usize> = parsed.errors.iter().map(IngestError::line).collect();
        assert_eq!(lines, vec![2, 5]);
        assert!(matches!(parse_ntriples(text, ParseMode::Strict), Err(IngestError::MalformedLine { line: 2, .. })));
    }

    #[test]
    fn canonical_write_is_identity() {
        let text = "<i:soy_cream> <rdfs:subClassOf> <i:plant_cream> .\n<i:soy_cream> <p:hasFat> \"3\"^^<xsd:decimal> .\n<i:soy_cream> <rdfs:label> \"soy \\\"cream\\\"\" .\n";
        assert_eq!(write_ntriples(&strict(text).unwrap()), text);
    }

    #[test]
    fn trailing_comment_after_dot_is_allowed() {
        assert_eq!(strict("<a> <b> <c> . # note").unwrap().len(), 1);
    }

    #[test]
    fn local_names() {
        assert_eq!(local_name("http://purl.obolibrary.org/obo/FOODON_001"), "FOODON_001");
        assert_eq!(local_name("rdfs:subClassOf"), "subClassOf");
        assert_eq!(local_name("x#y"), "y");
        assert_eq!(local_name("plain"), "plain");
    }
}
