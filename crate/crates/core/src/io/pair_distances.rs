//! Pair-distance CSV with columns `id_i,id_j,distance`.

use std::fs;
use std::path::Path;

use super::evaluations::format_decimal;
use crate::error::{FairnessError, Result};
use crate::metrics::PairDistances;

pub fn parse_pair_distances_str(text: &str) -> Result<PairDistances> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| FairnessError::schema(format!("unreadable header: {e}")))?;
    if headers.iter().collect::<Vec<_>>() != ["id_i", "id_j", "distance"] {
        return Err(FairnessError::schema(
            "pair-distance header must be 'id_i,id_j,distance'",
        ));
    }
    let mut matrix = PairDistances::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            FairnessError::schema_at(format!("malformed row: {e}"), line)
        })?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let d: f64 = row[2].trim().parse().map_err(|_| {
            FairnessError::data_at(format!("distance '{}' is not a number", &row[2]), line)
        })?;
        matrix.insert(&row[0], &row[1], d).map_err(|e| match e {
            FairnessError::Data { message, .. } => FairnessError::data_at(message, line),
            other => other,
        })?;
    }
    Ok(matrix)
}

pub fn parse_pair_distances(path: &Path) -> Result<PairDistances> {
    let text = fs::read_to_string(path).map_err(|source| FairnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_pair_distances_str(&text)
}

/// Canonical form: one row per unordered pair, `id_i < id_j`, ascending.
pub fn write_pair_distances(matrix: &PairDistances) -> String {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    out.write_record(["id_i", "id_j", "distance"]).expect("in-memory write");
    for (a, b, d) in matrix.iter() {
        out.write_record([a, b, format_decimal(d).as_str()])
            .expect("in-memory write");
    }
    String::from_utf8(out.into_inner().expect("flush")).expect("utf-8")
}
