use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use super::run::SweepResultRow;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "arch,format,bitrate_gbps,rx_power_dbm,lo_power_dbm,rin_db_hz,ber,errors,bits,ppb,seed";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(Error::Config(format!("unknown output format '{s}' (csv|json)"))),
        }
    }
}

fn io(e: impl std::fmt::Display) -> Error {
    Error::Config(format!("write failed: {e}"))
}

/// Writes rows as CSV (fixed header) or a JSON array.
pub fn write_rows<W: Write>(rows: &[SweepResultRow], format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(CSV_HEADER.split(',')).map_err(io)?;
            for r in rows {
                w.serialize(r).map_err(io)?;
            }
            w.flush().map_err(io)
        }
        OutputFormat::Json => write_json(rows, out),
    }
}

pub fn write_json<W: Write, S: Serialize + ?Sized>(value: &S, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value).map_err(io)?;
    writeln!(out).map_err(io)
}
