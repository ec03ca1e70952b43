//! CSV and JSON serialization of bench records.
//!
//! Reals are written as shortest round-trip decimals, so a file read back
//! gives bitwise-equal records.

use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{BenchError, Result};
use crate::suite::BenchRecord;

pub const CSV_HEADER: &str =
    "problem_id,m,n,kappa,solver,iterations,rel_error,eta_bar,estimate,residual_gap,wall_time_ns,status";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}', expected csv or json")),
        }
    }
}

impl Format {
    /// Guesses from a file extension; CSV unless it ends in `.json`.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> std::result::Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(records: &[BenchRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is UTF-8")
}

pub fn read_csv<R: Read>(input: R) -> std::result::Result<Vec<BenchRecord>, String> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(str::to_owned)
        .collect();
    if header.join(",") != CSV_HEADER {
        return Err(format!("unexpected header '{}'", header.join(",")));
    }
    rdr.deserialize().map(|r| r.map_err(|e| e.to_string())).collect()
}

pub fn emit_records(records: &[BenchRecord], path: &Path, format: Format) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| BenchError::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    match format {
        Format::Csv => write_csv(records, &mut out).map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => BenchError::io(path, io),
            other => BenchError::Records {
                path: path.to_path_buf(),
                message: format!("{other:?}"),
            },
        })?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, records).map_err(|e| BenchError::io(path, e.into()))?;
            out.write_all(b"\n").map_err(|e| BenchError::io(path, e))?;
        }
    }
    out.flush().map_err(|e| BenchError::io(path, e))
}

/// Reads a CSV or JSON record file (JSON when the extension is `.json`).
pub fn load_records(path: &Path) -> Result<Vec<BenchRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    let malformed = |message: String| BenchError::Records {
        path: path.to_path_buf(),
        message,
    };
    match Format::from_path(path) {
        Format::Csv => read_csv(text.as_bytes()).map_err(malformed),
        Format::Json => serde_json::from_str(&text).map_err(|e| malformed(e.to_string())),
    }
}
