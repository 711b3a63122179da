//! CSV and JSON storage of sampled distributions and signals.
//!
//! CSV files carry a header row (`E,P`, `t,f` or `omega,ReF,ImF`) followed by
//! one sample per row. JSON files hold `{"grid": {...}, "values": [...]}`,
//! with `re`/`im` arrays in place of `values` for spectra.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::distribution::{DistributionForm, EnergyDistribution};
use super::grid::Grid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Csv,
    Json,
}

impl FileFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("csv") => Ok(FileFormat::Csv),
            Some("json") => Ok(FileFormat::Json),
            _ => Err(Error::Parse(format!("cannot infer format of {}", path.display()))),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct RealRecord {
    grid: Grid,
    values: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ComplexRecord {
    grid: Grid,
    re: Vec<f64>,
    im: Vec<f64>,
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn read_to_string(path: &Path) -> Result<String> {
    let mut s = String::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut s))
        .map_err(|e| io_err(path, e))?;
    Ok(s)
}

/// Parses CSV text with the given header names into columns.
pub fn parse_columns(text: &str, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let found: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if found.len() != header.len() || found.iter().zip(header).any(|(a, b)| a != b) {
        return Err(Error::Parse(format!(
            "expected header {:?}, found {:?}",
            header.join(","),
            found.join(",")
        )));
    }
    let mut cols = vec![Vec::new(); header.len()];
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != header.len() {
            return Err(Error::Parse(format!("row {} has {} fields", line + 2, rec.len())));
        }
        for (col, field) in cols.iter_mut().zip(rec.iter()) {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::Parse(format!("row {}: bad number {field:?}", line + 2)))?;
            col.push(v);
        }
    }
    Ok(cols)
}

/// Writes columns as CSV with a header row. Values use the shortest
/// round-trip representation.
pub fn write_columns<W: Write>(out: W, header: &[&str], cols: &[&[f64]]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    let n = cols.first().map_or(0, |c| c.len());
    for i in 0..n {
        w.write_record(cols.iter().map(|c| format!("{:?}", c[i])))?;
    }
    w.flush().map_err(|e| Error::Io {
        path: "<csv>".into(),
        source: e,
    })?;
    Ok(())
}

/// Real samples `(grid, values)` from CSV with the given header or from JSON.
pub fn read_real(path: &Path, header: [&str; 2]) -> Result<(Grid, Vec<f64>)> {
    let text = read_to_string(path)?;
    match FileFormat::from_path(path)? {
        FileFormat::Csv => {
            let cols = parse_columns(&text, &header)?;
            let grid = Grid::from_samples(&cols[0])?;
            Ok((grid, cols[1].clone()))
        }
        FileFormat::Json => {
            let r: RealRecord = serde_json::from_str(&text)?;
            if r.values.len() != r.grid.len {
                return Err(Error::Parse("values do not match grid length".into()));
            }
            Ok((r.grid, r.values))
        }
    }
}

pub fn write_real(path: &Path, header: [&str; 2], grid: &Grid, values: &[f64]) -> Result<()> {
    let mut buf = Vec::new();
    match FileFormat::from_path(path)? {
        FileFormat::Csv => write_columns(&mut buf, &header, &[&grid.to_vec(), values])?,
        FileFormat::Json => {
            let r = RealRecord {
                grid: *grid,
                values: values.to_vec(),
            };
            serde_json::to_writer_pretty(&mut buf, &r)?;
        }
    }
    fs::write(path, buf).map_err(|e| io_err(path, e))
}

pub fn read_distribution(path: &Path, hbar: f64) -> Result<EnergyDistribution> {
    let (grid, values) = read_real(path, ["E", "P"])?;
    EnergyDistribution::sampled(grid, values, hbar)
}

pub fn write_distribution(path: &Path, p: &EnergyDistribution) -> Result<()> {
    match &p.form {
        DistributionForm::Sampled { grid, values } => {
            let shifted = Grid { start: grid.start + p.offset, ..*grid };
            write_real(path, ["E", "P"], &shifted, values)
        }
        _ => Err(Error::NotApplicable("only sampled distributions are stored as tables".into())),
    }
}

pub fn read_signal(path: &Path) -> Result<(Grid, Vec<f64>)> {
    read_real(path, ["t", "f"])
}

pub fn read_spectrum(path: &Path) -> Result<(Grid, Vec<Complex64>)> {
    let text = read_to_string(path)?;
    let (grid, re, im) = match FileFormat::from_path(path)? {
        FileFormat::Csv => {
            let mut cols = parse_columns(&text, &["omega", "ReF", "ImF"])?;
            let grid = Grid::from_samples(&cols[0])?;
            let im = cols.pop().unwrap_or_default();
            let re = cols.pop().unwrap_or_default();
            (grid, re, im)
        }
        FileFormat::Json => {
            let r: ComplexRecord = serde_json::from_str(&text)?;
            (r.grid, r.re, r.im)
        }
    };
    if re.len() != grid.len || im.len() != grid.len {
        return Err(Error::Parse("spectrum columns do not match grid length".into()));
    }
    Ok((grid, re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect()))
}

pub fn write_spectrum(path: &Path, grid: &Grid, values: &[Complex64]) -> Result<()> {
    let re: Vec<f64> = values.iter().map(|c| c.re).collect();
    let im: Vec<f64> = values.iter().map(|c| c.im).collect();
    let mut buf = Vec::new();
    match FileFormat::from_path(path)? {
        FileFormat::Csv => write_columns(&mut buf, &["omega", "ReF", "ImF"], &[&grid.to_vec(), &re, &im])?,
        FileFormat::Json => serde_json::to_writer_pretty(&mut buf, &ComplexRecord { grid: *grid, re, im })?,
    }
    fs::write(path, buf).map_err(|e| io_err(path, e))
}
