//! Water-footprint tables extracted from published sources.

use super::IngestError;

pub const WF_HEADER: [&str; 3] = ["name", "wf_m3_per_ton", "source"];

#[derive(Debug, Clone, PartialEq)]
pub struct WfRecord {
    pub name: String,
    /// m³ of freshwater per ton of product.
    pub wf_value: f64,
    pub source: String,
    pub line: usize,
}

pub fn parse_wf_table(text: &str) -> Result<Vec<WfRecord>, IngestError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| csv_error(e, 1))?.clone();
    if header.iter().collect::<Vec<_>>() != WF_HEADER {
        return Err(IngestError::MalformedHeader {
            expected: "name,wf_m3_per_ton,source",
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }

    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(e, 0))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let name = record[0].trim();
        if name.is_empty() {
            return Err(IngestError::EmptyField { line });
        }
        let raw = record[1].trim();
        let wf_value: f64 = raw.parse().map_err(|_| IngestError::UnparsableNumber { line, value: raw.to_string() })?;
        if !wf_value.is_finite() {
            return Err(IngestError::UnparsableNumber { line, value: raw.to_string() });
        }
        if wf_value < 0.0 {
            return Err(IngestError::NegativeValue { line });
        }
        out.push(WfRecord { name: name.to_string(), wf_value, source: record[2].to_string(), line });
    }
    Ok(out)
}

fn csv_error(e: csv::Error, fallback_line: usize) -> IngestError {
    let line = e.position().map_or(fallback_line, |p| p.line() as usize);
    match e.kind() {
        csv::ErrorKind::UnequalLengths { len, .. } => IngestError::ColumnCount { line, found: *len as usize },
        _ => IngestError::MalformedLine { line, reason: e.to_string() },
    }
}
