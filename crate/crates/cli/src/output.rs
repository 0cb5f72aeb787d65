//! Curve serialization: CSV with header `<axis>,rate,method,ci_halfwidth`
//! and a JSON array mirroring the same fields.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::error::CliResult;
use effrate::RateCurve;

/// One emitted row. `x` is SNR in dB for rate-versus-SNR curves and
/// Eb/N0 in dB for wideband curves; the header names whichever it is.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub x: f64,
    pub rate: f64,
    pub method: String,
    pub ci_halfwidth: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    SnrDb,
    EbN0Db,
}

impl Axis {
    pub fn header(self) -> &'static str {
        match self {
            Axis::SnrDb => "snr_db",
            Axis::EbN0Db => "eb_n0_db",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn rows_of(curve: &RateCurve) -> Vec<Row> {
    curve
        .points()
        .iter()
        .map(|p| Row {
            x: p.snr_db,
            rate: p.rate,
            method: curve.method().label().to_string(),
            ci_halfwidth: p.ci_halfwidth,
        })
        .collect()
}

pub fn write_csv<W: Write>(out: W, axis: Axis, rows: &[Row]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([axis.header(), "rate", "method", "ci_halfwidth"])?;
    for r in rows {
        let ci = r.ci_halfwidth.map(|c| c.to_string()).unwrap_or_default();
        w.write_record([r.x.to_string(), r.rate.to_string(), r.method.clone(), ci])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
pub fn read_csv<R: std::io::Read>(input: R) -> CliResult<(Axis, Vec<Row>)> {
    let mut rd = csv::Reader::from_reader(input);
    let axis = match rd.headers()?.get(0) {
        Some("eb_n0_db") => Axis::EbN0Db,
        _ => Axis::SnrDb,
    };
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let num = |i: usize| -> CliResult<f64> {
            rec.get(i)
                .unwrap_or("")
                .parse()
                .map_err(|e| crate::error::CliError::new(crate::error::Kind::Io, format!("bad CSV number: {e}")))
        };
        let ci = match rec.get(3) {
            Some("") | None => None,
            Some(_) => Some(num(3)?),
        };
        rows.push(Row {
            x: num(0)?,
            rate: num(1)?,
            method: rec.get(2).unwrap_or("").to_string(),
            ci_halfwidth: ci,
        });
    }
    Ok((axis, rows))
}

pub fn write_json<W: Write>(mut out: W, axis: Axis, rows: &[Row]) -> CliResult<()> {
    let objects: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            serde_json::json!({
                axis.header(): r.x,
                "rate": r.rate,
                "method": r.method,
                "ci_halfwidth": r.ci_halfwidth,
            })
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &objects)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_rows(path: Option<&Path>, format: Format, axis: Axis, rows: &[Row]) -> CliResult<()> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        Format::Csv => write_csv(sink, axis, rows),
        Format::Json => write_json(sink, axis, rows),
    }
}
