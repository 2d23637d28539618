//! CSV ingestion and serialization, and the JSON text form of partitions.

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::relation::{Relation, Scheme};

/// A relation read from CSV, with the number of duplicate rows dropped.
#[derive(Clone, Debug)]
pub struct Ingested {
    pub relation: Relation,
    pub duplicates: usize,
}

/// Reads UTF-8 CSV with a header row. Cells are opaque strings; each
/// column's domain is its distinct values in order of first appearance.
pub fn parse_csv(bytes: &[u8]) -> Result<Ingested> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(bytes);
    let header: Vec<String> = reader
        .headers()
        .map_err(csv_error)?
        .iter()
        .map(str::to_string)
        .collect();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(Error::Input("missing header row".into()));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        rows.push(record.iter().map(str::to_string).collect::<Vec<_>>());
    }
    if rows.is_empty() {
        return Err(Error::Input("no data rows".into()));
    }
    let (relation, duplicates) = Relation::from_rows(&header, &rows).map_err(|e| match e {
        Error::InvalidScheme(m) => Error::Input(format!("header: {m}")),
        other => other,
    })?;
    Ok(Ingested { relation, duplicates })
}

fn csv_error(e: csv::Error) -> Error {
    Error::Input(format!("csv: {e}"))
}

/// Writes the header and every tuple in canonical order, LF line endings.
pub fn write_csv(r: &Relation) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(r.scheme().names()).expect("in-memory write");
    for t in r.tuples() {
        w.write_record(r.labels(t)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("labels are UTF-8")
}

/// Parses `[["A","B"],["C"]]` (or the unquoted shorthand `[[A,B],[C]]`)
/// against a scheme.
pub fn parse_partition(scheme: &Scheme, text: &str) -> Result<Partition> {
    let blocks: Vec<Vec<String>> = match serde_json::from_str(text) {
        Ok(b) => b,
        Err(e) => parse_bare(text).ok_or_else(|| Error::Input(format!("partition: {e}")))?,
    };
    scheme.partition_from_names(&blocks)
}

/// `[[A,B],[C,D]]` with bare names; names may not contain brackets, commas
/// or quotes.
fn parse_bare(text: &str) -> Option<Vec<Vec<String>>> {
    let inner = text.trim().strip_prefix('[')?.strip_suffix(']')?.trim();
    let mut blocks = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        let body_start = rest.strip_prefix('[')?;
        let end = body_start.find(']')?;
        let body = &body_start[..end];
        if body.contains(['[', '"']) {
            return None;
        }
        let names: Vec<String> = body.split(',').map(|s| s.trim().to_string()).collect();
        if names.iter().any(String::is_empty) {
            return None;
        }
        blocks.push(names);
        rest = body_start[end + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return None;
            }
        } else if !rest.is_empty() {
            return None;
        }
    }
    Some(blocks)
}
