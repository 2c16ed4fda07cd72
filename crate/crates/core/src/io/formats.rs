//! CSV and JSON outputs. Numbers are written with 9 significant digits and
//! every file is written to a sibling temporary and renamed into place.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::spectrum::ResponseSpectrum;

/// Decimal text with 9 significant digits.
pub fn fmt_num(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.8e}").parse().unwrap_or(v);
    let a = rounded.abs();
    if rounded == 0.0 || (1e-4..1e9).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// Writes `bytes` to `path` via a temporary file in the same directory.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidArgument(format!("'{}' is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    atomic_write(path, text.as_bytes())
}

/// Rows of formatted numbers under a header line.
pub fn numeric_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|&v| fmt_num(v)))?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

pub fn trace_csv(ts: &TimeSeries) -> Result<Vec<u8>> {
    numeric_csv(
        &["t_s", "acc_ms2"],
        ts.samples().iter().enumerate().map(|(k, &a)| vec![ts.time(k), a]),
    )
}

fn read_columns<R: Read>(reader: R, expected: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != expected {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header {} but found {}", expected.join(","), header.join(",")),
        });
    }
    let mut cols = vec![Vec::new(); expected.len()];
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        for (c, col) in cols.iter_mut().enumerate() {
            let v: f64 = rec.get(c).unwrap_or("").parse().map_err(|_| Error::Parse {
                line: i + 2,
                message: format!("column {} is not a number", expected[c]),
            })?;
            col.push(v);
        }
    }
    Ok(cols)
}

/// Reads a trace written by [`trace_csv`]. The time step is the mean
/// spacing of the time column.
pub fn read_trace_csv<R: Read>(reader: R) -> Result<TimeSeries> {
    let cols = read_columns(reader, &["t_s", "acc_ms2"])?;
    let (t, a) = (&cols[0], &cols[1]);
    if t.len() < 2 {
        return Err(Error::Empty("trace CSV"));
    }
    let dt = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    let dt: f64 = fmt_num(dt).parse().unwrap_or(dt);
    TimeSeries::with_origin(a.clone(), dt, t[0])
}

pub fn spectrum_csv(spectrum: &ResponseSpectrum) -> Result<Vec<u8>> {
    numeric_csv(
        &["period_s", "sa_g"],
        spectrum.periods.iter().zip(&spectrum.sa).map(|(&p, &s)| vec![p, s]),
    )
}

/// Reads a spectrum written by [`spectrum_csv`]; period 0 is PGA.
pub fn read_spectrum_csv<R: Read>(reader: R) -> Result<ResponseSpectrum> {
    let mut cols = read_columns(reader, &["period_s", "sa_g"])?;
    let sa = cols.pop().unwrap_or_default();
    let periods = cols.pop().unwrap_or_default();
    ResponseSpectrum::new(periods, sa)
}
