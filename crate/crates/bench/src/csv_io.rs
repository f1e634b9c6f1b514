//! CSV output of convergence records.
//!
//! Header `scheme,beta,n,error,wall_time_s`. Floats are written in the
//! shortest form that parses back to the same value (`1.25e-3`), so files
//! round-trip losslessly.

use std::io::{Read, Write};
use std::path::Path;

use crate::config::SchemeTag;
use crate::error::{BenchError, Result};
use crate::run::ConvergenceRecord;

pub const HEADER: [&str; 5] = ["scheme", "beta", "n", "error", "wall_time_s"];

pub fn write_records<W: Write>(records: &[ConvergenceRecord], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(HEADER)?;
    for r in records {
        writer.write_record([
            r.scheme.as_str().to_string(),
            r.beta.to_string(),
            r.n.to_string(),
            format!("{:e}", r.error),
            format!("{:e}", r.wall_time_s),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<ConvergenceRecord>> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers()?;
    if header.iter().ne(HEADER) {
        return Err(BenchError::MalformedRow {
            row: 0,
            reason: format!("unexpected header {header:?}"),
        });
    }
    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row?;
        let line = i + 1;
        let field = |k: usize| row.get(k).unwrap_or_default();
        let bad = |reason: String| BenchError::MalformedRow { row: line, reason };
        let float = |k: usize| {
            field(k)
                .parse::<f64>()
                .map_err(|e| bad(format!("column {}: {e}", HEADER[k])))
        };
        records.push(ConvergenceRecord {
            scheme: field(0)
                .parse::<SchemeTag>()
                .map_err(|e| bad(e.to_string()))?,
            beta: float(1)?,
            n: field(2)
                .parse()
                .map_err(|e| bad(format!("column n: {e}")))?,
            error: float(3)?,
            wall_time_s: float(4)?,
        });
    }
    Ok(records)
}

pub fn write_csv(records: &[ConvergenceRecord], path: &Path) -> Result<()> {
    write_records(records, std::fs::File::create(path)?)
}

pub fn read_csv(path: &Path) -> Result<Vec<ConvergenceRecord>> {
    read_records(std::fs::File::open(path)?)
}
