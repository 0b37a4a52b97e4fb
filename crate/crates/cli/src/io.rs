//! Dataset CSV files and JSON/CSV result writers.
//!
//! Floats are written with 17 significant digits (`{:.16e}`) so that identical runs give
//! byte-identical files and every value round-trips exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;
use spectral_leverage::DesignSet;

use crate::error::{CliError, CliResult};

pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// A float serialized as a JSON number with 17 significant digits; non-finite becomes `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F17(pub f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(fmt17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

pub fn f17_vec(v: &[f64]) -> Vec<F17> {
    v.iter().copied().map(F17).collect()
}

pub fn f17_opt(v: Option<f64>) -> Option<F17> {
    v.map(F17)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> CliError + '_ {
    move |source| CliError::Csv { path: path.to_path_buf(), source }
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

/// Column layout of a dataset header.
#[derive(Debug, Default)]
struct Layout {
    x: Vec<usize>,
    y: Option<usize>,
    f_star: Option<usize>,
    density: Option<usize>,
}

fn layout(path: &Path, header: &csv::StringRecord) -> CliResult<Layout> {
    let bad = |msg: String| CliError::Config(format!("{}: {msg}", path.display()));
    let mut out = Layout::default();
    let mut x_cols: Vec<(usize, usize)> = Vec::new();
    for (col, name) in header.iter().enumerate() {
        let name = name.trim();
        let slot = match name {
            "y" => &mut out.y,
            "f_star" => &mut out.f_star,
            "density" => &mut out.density,
            _ => {
                let k = name
                    .strip_prefix('x')
                    .and_then(|k| k.parse::<usize>().ok())
                    .ok_or_else(|| bad(format!("unknown column {name:?}")))?;
                x_cols.push((k, col));
                continue;
            }
        };
        if slot.replace(col).is_some() {
            return Err(bad(format!("duplicate column {name:?}")));
        }
    }
    x_cols.sort_unstable();
    for (expected, &(k, _)) in x_cols.iter().enumerate() {
        if k != expected {
            return Err(bad(format!("input columns must be x0..x{{d-1}}; missing x{expected}")));
        }
    }
    if x_cols.is_empty() {
        return Err(bad("no input columns x0..".into()));
    }
    out.x = x_cols.into_iter().map(|(_, c)| c).collect();
    Ok(out)
}

pub fn read_dataset(path: &Path) -> CliResult<DesignSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(csv_err(path))?;
    let header = rdr.headers().map_err(csv_err(path))?.clone();
    let layout = layout(path, &header)?;
    let mut points = Vec::new();
    let (mut y, mut f_star, mut density) = (Vec::new(), Vec::new(), Vec::new());
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(csv_err(path))?;
        let field = |col: usize| -> CliResult<f64> {
            let raw = record.get(col).unwrap_or("");
            raw.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                CliError::Config(format!(
                    "{}: row {}, column {:?}: not a finite number: {raw:?}",
                    path.display(),
                    line + 2,
                    &header[col]
                ))
            })
        };
        for &c in &layout.x {
            points.push(field(c)?);
        }
        for (col, dst) in [(layout.y, &mut y), (layout.f_star, &mut f_star), (layout.density, &mut density)] {
            if let Some(c) = col {
                dst.push(field(c)?);
            }
        }
    }
    let mut design = DesignSet::new(layout.x.len(), points)?;
    if layout.y.is_some() {
        design = design.with_responses(y)?;
    }
    if layout.f_star.is_some() {
        design = design.with_f_star(f_star)?;
    }
    if layout.density.is_some() {
        design = design.with_density(density)?;
    }
    Ok(design)
}

pub fn write_dataset(path: &Path, x: &DesignSet) -> CliResult<()> {
    let mut wtr = csv::Writer::from_writer(create(path)?);
    let mut header: Vec<String> = (0..x.dim()).map(|j| format!("x{j}")).collect();
    let extras: Vec<(&str, &Vec<f64>)> = [("y", &x.responses), ("f_star", &x.f_star), ("density", &x.density)]
        .into_iter()
        .filter_map(|(name, col)| col.as_ref().map(|c| (name, c)))
        .collect();
    header.extend(extras.iter().map(|(name, _)| name.to_string()));
    wtr.write_record(&header).map_err(csv_err(path))?;
    for (i, row) in x.rows().enumerate() {
        let mut rec: Vec<String> = row.iter().map(|&v| fmt17(v)).collect();
        rec.extend(extras.iter().map(|(_, c)| fmt17(c[i])));
        wtr.write_record(&rec).map_err(csv_err(path))?;
    }
    wtr.flush().map_err(io_err(path))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

/// Writes a header and rows of already formatted fields.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut wtr = csv::Writer::from_writer(create(path)?);
    wtr.write_record(header).map_err(csv_err(path))?;
    for r in rows {
        wtr.write_record(r).map_err(csv_err(path))?;
    }
    wtr.flush().map_err(io_err(path))
}

/// Formats an optional float for a CSV cell; missing values are empty.
pub fn cell(v: Option<f64>) -> String {
    v.map(fmt17).unwrap_or_default()
}
