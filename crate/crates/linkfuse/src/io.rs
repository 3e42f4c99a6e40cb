//! File formats: edge lists, attribute CSVs, pair lists and weight files.
//!
//! Edge list: one edge per line, two whitespace- or comma-separated labels
//! with an optional third integer column holding a timestamp; lines starting
//! with `#` are ignored. Attribute file: CSV with header
//! `node,<attr1>,<attr2>,...`; an empty field or the literal `NA` marks a
//! missing value. Original node labels are used throughout, never dense ids.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::attributes::AttributeTable;
use crate::error::{Error, Result};
use crate::graph::{BuildReport, Graph, GraphBuilder, NodeId};
use crate::weights::WeightSet;

fn parse_error(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

/// Reads an edge-list file and builds the graph. Lines stream straight into
/// the interning builder, so the file is never held in memory whole.
pub fn load_graph(path: impl AsRef<Path>) -> Result<(Graph, BuildReport)> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path)?);
    let mut builder = GraphBuilder::new();
    let mut saw_edges = false;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        match fields.as_slice() {
            [a, b] => builder.add(a, b, None),
            [a, b, ts] => {
                let stamp: i64 = ts
                    .parse()
                    .map_err(|_| parse_error(path, idx + 1, format!("invalid timestamp '{ts}'")))?;
                builder.add(a, b, Some(stamp));
            }
            _ => {
                return Err(parse_error(
                    path,
                    idx + 1,
                    format!("expected 2 or 3 fields, found {}", fields.len()),
                ))
            }
        }
        saw_edges = true;
    }
    if !saw_edges {
        return Err(parse_error(path, 0, "no edges in file"));
    }
    builder.finish()
}

/// Writes the graph back out, one edge per line in stored order, using the
/// original labels (and timestamps when present).
pub fn write_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for (idx, &(u, v)) in g.edges().iter().enumerate() {
        match g.timestamps() {
            Some(ts) => writeln!(out, "{} {} {}", g.label(u), g.label(v), ts[idx])?,
            None => writeln!(out, "{} {}", g.label(u), g.label(v))?,
        }
    }
    out.flush()?;
    Ok(())
}

/// Attribute CSV ingestion summary.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AttributeReadReport {
    /// Rows whose node label does not appear in the graph.
    pub unknown_labels: usize,
}

/// Reads the attribute CSV against a graph. Rows for labels absent from the
/// graph are skipped (counted and warned about); graph nodes without a row
/// are missing on every attribute.
pub fn load_attribute_table(
    path: impl AsRef<Path>,
    g: &Graph,
) -> Result<(AttributeTable, AttributeReadReport)> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.len() < 2 {
        return Err(parse_error(
            path,
            1,
            "header must be node,<attr1>[,<attr2>...]",
        ));
    }
    let names: Vec<String> = headers.iter().skip(1).map(str::to_owned).collect();
    let mut columns: Vec<Vec<Option<String>>> = vec![vec![None; g.node_count()]; names.len()];
    let mut report = AttributeReadReport::default();
    for (idx, row) in reader.records().enumerate() {
        let row = row?;
        if row.len() != headers.len() {
            return Err(parse_error(
                path,
                idx + 2,
                format!("expected {} fields, found {}", headers.len(), row.len()),
            ));
        }
        let label = &row[0];
        let Some(node) = g.id_of(label) else {
            report.unknown_labels += 1;
            continue;
        };
        for (k, cell) in row.iter().skip(1).enumerate() {
            if !cell.is_empty() && cell != "NA" {
                columns[k][node] = Some(cell.to_owned());
            }
        }
    }
    if report.unknown_labels > 0 {
        log::warn!(
            "{}: skipped {} rows with labels absent from the graph",
            path.display(),
            report.unknown_labels
        );
    }
    let table = AttributeTable::from_columns(g.node_count(), names, columns)?;
    Ok((table, report))
}

/// Writes the table as CSV with one row per graph node in dense-id order;
/// missing values become empty fields.
pub fn write_attribute_table(
    tab: &AttributeTable,
    g: &Graph,
    path: impl AsRef<Path>,
) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    let names = tab.attribute_names();
    let mut header = vec!["node"];
    header.extend(names.iter().copied());
    writer.write_record(&header)?;
    for node in 0..g.node_count() {
        let mut row = vec![g.label(node).to_owned()];
        for name in &names {
            row.push(tab.value(name, node)?.unwrap_or("").to_owned());
        }
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads a pair list (two labels per line, same separators and comment rule
/// as edge lists), resolving labels against the graph.
pub fn load_pair_list(path: impl AsRef<Path>, g: &Graph) -> Result<Vec<(NodeId, NodeId)>> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path)?);
    let mut pairs = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        let [a, b] = fields.as_slice() else {
            return Err(parse_error(
                path,
                idx + 1,
                format!("expected 2 fields, found {}", fields.len()),
            ));
        };
        let resolve = |label: &str| {
            g.id_of(label)
                .ok_or_else(|| parse_error(path, idx + 1, format!("unknown node label '{label}'")))
        };
        pairs.push((resolve(a)?, resolve(b)?));
    }
    Ok(pairs)
}

pub fn load_weight_set(path: impl AsRef<Path>) -> Result<WeightSet> {
    let file = File::open(path.as_ref())?;
    serde_json::from_reader(BufReader::new(file))
        .map_err(|e| parse_error(path.as_ref(), 0, format!("invalid weight file: {e}")))
}

pub fn write_weight_set(weights: &WeightSet, path: impl AsRef<Path>) -> Result<()> {
    let file = File::create(path.as_ref())?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut out, weights)
        .map_err(|e| Error::InvalidParameter(format!("serialization failed: {e}")))?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}
