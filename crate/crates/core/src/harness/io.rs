//! CSV persistence. Reals are written in shortest round-trip form and lines
//! end with `\n`.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::diagnostics::{CorrectionReport, OutsideBandReport};
use crate::error::{Error, Result};
use crate::matrix::{DataMatrix, SymMatrix};

use super::TrialRecord;

pub const RECORD_HEADER: &str = "alpha,n,p,k,trial,seed,sq_spectral_error,elapsed_ms";

/// Shortest decimal string that parses back to the same `f64`.
pub fn format_real(x: f64) -> String {
    format!("{x:?}")
}

fn parse_real(s: &str) -> Option<f64> {
    s.trim().parse().ok()
}

pub fn records_to_csv(records: &[TrialRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(RECORD_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            format_real(r.alpha),
            r.n,
            r.p,
            r.k,
            r.trial,
            r.seed,
            format_real(r.sq_spectral_error),
            format_real(r.elapsed_ms),
        ));
    }
    out
}

pub fn write_csv(records: &[TrialRecord], path: impl AsRef<Path>) -> Result<()> {
    write_string(path.as_ref(), &records_to_csv(records))
}

pub fn read_records_csv(path: impl AsRef<Path>) -> Result<Vec<TrialRecord>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_records_csv(&text).map_err(|message| Error::Parse {
        path: path.to_path_buf(),
        message,
    })
}

pub fn parse_records_csv(text: &str) -> std::result::Result<Vec<TrialRecord>, String> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| e.to_string())?;
    if header.iter().collect::<Vec<_>>().join(",") != RECORD_HEADER {
        return Err(format!("unexpected header, expected `{RECORD_HEADER}`"));
    }
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let bad = |field: &str| format!("record {}: bad `{field}`", line + 1);
        let int = |i: usize, name: &str| -> std::result::Result<u64, String> {
            rec.get(i).and_then(|s| s.parse().ok()).ok_or_else(|| bad(name))
        };
        let real = |i: usize, name: &str| -> std::result::Result<f64, String> {
            rec.get(i).and_then(parse_real).ok_or_else(|| bad(name))
        };
        out.push(TrialRecord {
            alpha: real(0, "alpha")?,
            n: int(1, "n")? as usize,
            p: int(2, "p")? as usize,
            k: int(3, "k")? as usize,
            trial: int(4, "trial")? as usize,
            seed: int(5, "seed")?,
            sq_spectral_error: real(6, "sq_spectral_error")?,
            elapsed_ms: real(7, "elapsed_ms")?,
        });
    }
    Ok(out)
}

fn rows_to_csv<'a>(rows: impl Iterator<Item = &'a [f64]>) -> String {
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row.iter().map(|&x| format_real(x)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Headerless CSV, one observation per line.
pub fn data_to_csv(x: &DataMatrix) -> String {
    rows_to_csv(x.iter_rows())
}

pub fn sym_to_csv(a: &SymMatrix) -> String {
    rows_to_csv((0..a.dim()).map(|i| a.row(i)))
}

/// Parses headerless numeric CSV; every line must have the same number of fields.
pub fn parse_data_csv(text: &str) -> std::result::Result<DataMatrix, String> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(false)
        .from_reader(text.as_bytes());
    let mut cols = None;
    let mut data = Vec::new();
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        match cols {
            None => cols = Some(rec.len()),
            Some(c) if c != rec.len() => {
                return Err(format!("line {}: expected {c} fields", rows + 1))
            }
            _ => {}
        }
        for field in rec.iter() {
            data.push(
                parse_real(field)
                    .ok_or_else(|| format!("line {}: `{field}` is not a number", rows + 1))?,
            );
        }
        rows += 1;
    }
    DataMatrix::from_row_major(rows, cols.unwrap_or(0), data).map_err(|e| e.to_string())
}

pub fn read_data_csv(path: impl AsRef<Path>) -> Result<DataMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_data_csv(&text).map_err(|message| Error::Parse {
        path: path.to_path_buf(),
        message,
    })
}

pub fn correction_report_to_csv(report: &CorrectionReport) -> String {
    let mut out = String::from("m,max_norm\n");
    for (m, v) in report.m_values.iter().zip(&report.max_norms) {
        out.push_str(&format!("{m},{}\n", format_real(*v)));
    }
    out
}

pub fn outside_band_to_csv(reports: &[OutsideBandReport]) -> String {
    let mut out = String::from("k,spec_norm,l1_norm,half_band_tail\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.k,
            format_real(r.spec_norm),
            format_real(r.l1_norm),
            format_real(r.half_band_tail)
        ));
    }
    out
}

pub fn write_string(path: &Path, contents: &str) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(contents.as_bytes())
        .map_err(|e| Error::io(path, e))
}
