//! Time-series files: `t,<name>` CSV and a two-array JSON object.

use crate::error::{CliError, CliResult};
use cfode_core::{Grid, GridFunction};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

pub fn render_csv(name: &str, f: &GridFunction) -> String {
    let mut out = String::with_capacity(32 * f.values().len());
    out.push_str("t,");
    out.push_str(name);
    out.push('\n');
    let mut tb = ryu::Buffer::new();
    let mut vb = ryu::Buffer::new();
    for (t, v) in f.grid().nodes().zip(f.values()) {
        out.push_str(tb.format(t));
        out.push(',');
        out.push_str(vb.format(*v));
        out.push('\n');
    }
    out
}

pub fn render_json(name: &str, f: &GridFunction) -> String {
    let t: Vec<f64> = f.grid().nodes().collect();
    let mut obj = serde_json::Map::new();
    obj.insert("t".into(), t.into());
    obj.insert(name.into(), f.values().to_vec().into());
    let mut s = serde_json::Value::Object(obj).to_string();
    s.push('\n');
    s
}

pub fn write_series(path: &Path, name: &str, f: &GridFunction, format: Format) -> CliResult<()> {
    let body = match format {
        Format::Csv => render_csv(name, f),
        Format::Json => render_json(name, f),
    };
    write_text(path, &body)
}

pub fn write_text(path: &Path, body: &str) -> CliResult<()> {
    fs::write(path, body).map_err(|e| CliError::io(path, e))
}

/// Two-column numeric CSV with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub t: Vec<f64>,
    pub y: Vec<f64>,
}

pub fn read_samples(path: &Path, flag: &'static str) -> CliResult<Samples> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_samples(&text).map_err(|m| CliError::validation(flag, format!("{}: {m}", path.display())))
}

pub fn parse_samples(text: &str) -> Result<Samples, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| e.to_string())?.clone();
    if headers.len() != 2 || &headers[0] != "t" {
        return Err(format!(
            "expected header `t,<name>`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        ));
    }
    let mut samples = Samples {
        t: Vec::new(),
        y: Vec::new(),
    };
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        let line = i + 2;
        if record.len() != 2 {
            return Err(format!("line {line}: expected 2 fields, found {}", record.len()));
        }
        let parse = |s: &str| -> Result<f64, String> {
            let v: f64 = s.parse().map_err(|_| format!("line {line}: `{s}` is not a number"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("line {line}: non-finite value `{s}`"))
            }
        };
        let t = parse(&record[0])?;
        if let Some(&prev) = samples.t.last() {
            if t <= prev {
                return Err(format!("line {line}: t must be strictly increasing"));
            }
        }
        samples.t.push(t);
        samples.y.push(parse(&record[1])?);
    }
    if samples.t.len() < 2 {
        return Err("need at least two samples".into());
    }
    Ok(samples)
}

/// Recovers the uniform grid a series was sampled on.
pub fn uniform_grid(samples: &Samples) -> Result<Grid, String> {
    let n = samples.t.len();
    let grid = Grid::new(samples.t[0], samples.t[n - 1], n).map_err(|e| e.to_string())?;
    let scale = samples.t[0].abs().max(samples.t[n - 1].abs()).max(1.0);
    for (k, t) in samples.t.iter().enumerate() {
        if (t - grid.node(k)).abs() > 1e-9 * scale {
            return Err(format!("t is not uniformly spaced at row {}", k + 1));
        }
    }
    Ok(grid)
}
