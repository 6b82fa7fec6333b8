//! Delimited-text ingestion and emission of multichannel recordings.
//!
//! Format: one header row of channel names, then one row per time point.
//! Columns are separated by commas or whitespace (sniffed from the header).

use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::series::TimeSeriesSet;

/// Parses a delimited table; does not demean.
pub fn parse_table(text: &str) -> Result<TimeSeriesSet> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let Some((header_line, header)) = lines.next() else {
        return Err(Error::parse(1, "empty input: expected a header row"));
    };
    let comma = header.contains(',');
    let split = |s: &str| -> Vec<String> {
        if comma {
            s.split(',').map(|c| c.trim().to_string()).collect()
        } else {
            s.split_whitespace().map(|c| c.to_string()).collect()
        }
    };
    let names = split(header);
    if names.len() < 2 {
        return Err(Error::parse(
            header_line,
            format!(
                "expected at least 2 columns, found {} in the header",
                names.len()
            ),
        ));
    }
    if names.iter().any(|n| n.is_empty()) {
        return Err(Error::parse(header_line, "empty channel name in the header"));
    }
    let k = names.len();

    let mut rows: Vec<f64> = Vec::new();
    let mut n = 0usize;
    for (line_no, line) in lines {
        let cells = split(line);
        if cells.len() != k {
            return Err(Error::parse(
                line_no,
                format!("ragged row: expected {k} cells, found {}", cells.len()),
            ));
        }
        for (col, cell) in cells.iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| {
                Error::parse_at(line_no, col + 1, format!("non-numeric cell '{cell}'"))
            })?;
            if !value.is_finite() {
                return Err(Error::parse_at(
                    line_no,
                    col + 1,
                    format!("non-finite value '{cell}'"),
                ));
            }
            rows.push(value);
        }
        n += 1;
    }
    if n < 2 {
        return Err(Error::parse(
            header_line,
            format!("expected at least 2 data rows, found {n}"),
        ));
    }
    let values = Array2::from_shape_vec((n, k), rows).expect("shape checked per row");
    TimeSeriesSet::new(names, values)
}

/// Reads and parses a table file, then demeans every channel.
pub fn read_table(path: impl AsRef<Path>) -> Result<TimeSeriesSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(parse_table(&text)?.demean())
}

/// Serializes a series set as a tab-separated table with a header row.
/// Values use the shortest representation that round-trips exactly.
pub fn format_table(ts: &TimeSeriesSet) -> String {
    let mut out = String::new();
    out.push_str(&ts.names().join("\t"));
    out.push('\n');
    for row in ts.values().rows() {
        let mut first = true;
        for v in row {
            if !first {
                out.push('\t');
            }
            let _ = write!(out, "{v}");
            first = false;
        }
        out.push('\n');
    }
    out
}

/// Writes [`format_table`] output to a file.
pub fn write_table(ts: &TimeSeriesSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_table(ts)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}
