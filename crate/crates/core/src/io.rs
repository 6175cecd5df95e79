//! Step function files.
//!
//! JSON:
//!
//! ```json
//! {"dim": 1, "depth": 2, "root": {"origin": [0.0], "side": 1.0}, "values": [0.0, 1.0, 2.0, 3.0]}
//! ```
//!
//! Values are row-major. Floats are written in shortest round-trip form and
//! parsed with correct rounding, so a store/load cycle is bit-exact.
//!
//! CSV (one-dimensional grids only): four `key,value` header lines for
//! `dim`, `depth`, `origin` and `side`, then one value per line.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{validation, Error, Result};
use crate::grid::{DyadicGrid, StepFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// `.csv` selects CSV, anything else JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RootFile {
    origin: Vec<f64>,
    side: f64,
}

#[derive(Serialize, Deserialize)]
struct StepFile<V> {
    dim: usize,
    depth: u32,
    root: RootFile,
    values: Vec<V>,
}

pub fn to_json(f: &StepFunction) -> Result<String> {
    let grid = f.grid();
    let file = StepFile {
        dim: grid.dim(),
        depth: grid.depth(),
        root: RootFile { origin: grid.origin().to_vec(), side: grid.side() },
        values: f.values().to_vec(),
    };
    Ok(serde_json::to_string(&file)?)
}

pub fn from_json(text: &str) -> Result<StepFunction> {
    // Bare NaN / Infinity tokens are not JSON; quote them so the offending
    // cell can be reported by index instead of by byte offset.
    let parsed: StepFile<serde_json::Value> = match serde_json::from_str(text) {
        Ok(file) => file,
        Err(first) => serde_json::from_str(&quote_non_finite_tokens(text)).map_err(|_| first)?,
    };
    let grid = DyadicGrid::new(parsed.dim, parsed.depth, parsed.root.origin, parsed.root.side)?;
    if parsed.values.len() != grid.cell_count() {
        return Err(Error::LengthMismatch { expected: grid.cell_count(), found: parsed.values.len() });
    }
    let values = parsed
        .values
        .into_iter()
        .enumerate()
        .map(|(index, v)| match v.as_f64() {
            Some(x) if x.is_finite() => Ok(x),
            _ => Err(Error::NonFinite { index, value: v.to_string() }),
        })
        .collect::<Result<Vec<_>>>()?;
    StepFunction::new(grid, values)
}

fn quote_non_finite_tokens(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 16);
    let mut in_string = false;
    let mut escaped = false;
    let mut rest = text;
    while let Some(c) = rest.chars().next() {
        if in_string {
            out.push(c);
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_string = false;
            }
            rest = &rest[c.len_utf8()..];
            continue;
        }
        if c == '"' {
            in_string = true;
        }
        if let Some(token) = ["-Infinity", "+Infinity", "Infinity", "-NaN", "NaN"]
            .iter()
            .find(|t| rest.starts_with(*t))
        {
            out.push('"');
            out.push_str(token);
            out.push('"');
            rest = &rest[token.len()..];
            continue;
        }
        out.push(c);
        rest = &rest[c.len_utf8()..];
    }
    out
}

pub fn to_csv(f: &StepFunction) -> Result<String> {
    let grid = f.grid();
    if grid.dim() != 1 {
        return Err(validation("CSV step functions are one-dimensional"));
    }
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    w.write_record(["dim", &grid.dim().to_string()])?;
    w.write_record(["depth", &grid.depth().to_string()])?;
    w.write_record(["origin", &grid.origin()[0].to_string()])?;
    w.write_record(["side", &grid.side().to_string()])?;
    for v in f.values() {
        w.write_record([v.to_string()])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn from_csv(text: &str) -> Result<StepFunction> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let records = reader.records().collect::<std::result::Result<Vec<_>, _>>()?;
    if records.len() < 4 {
        return Err(validation("CSV needs a four-line header: dim, depth, origin, side"));
    }
    let header = |line: usize, key: &str| -> Result<String> {
        let r = &records[line];
        if r.len() != 2 || &r[0] != key {
            return Err(validation(format!("CSV header line {} must be '{key},<value>'", line + 1)));
        }
        Ok(r[1].to_string())
    };
    let parse_num = |s: String, key: &str| -> Result<f64> {
        s.parse::<f64>().map_err(|_| validation(format!("bad {key} '{s}'")))
    };
    let dim: usize = header(0, "dim")?.parse().map_err(|_| validation("bad dim"))?;
    if dim != 1 {
        return Err(validation("CSV step functions are one-dimensional"));
    }
    let depth: u32 = header(1, "depth")?.parse().map_err(|_| validation("bad depth"))?;
    let origin = parse_num(header(2, "origin")?, "origin")?;
    let side = parse_num(header(3, "side")?, "side")?;
    let grid = DyadicGrid::new(dim, depth, vec![origin], side)?;
    let values = records[4..]
        .iter()
        .enumerate()
        .map(|(index, r)| {
            let field = r.get(0).unwrap_or("");
            match field.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                Ok(_) => Err(Error::NonFinite { index, value: field.to_string() }),
                Err(_) => Err(validation(format!("cell {index}: cannot parse '{field}'"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    StepFunction::new(grid, values)
}

pub fn store(f: &StepFunction, path: &Path) -> Result<()> {
    let text = match Format::from_path(path) {
        Format::Json => to_json(f)?,
        Format::Csv => to_csv(f)?,
    };
    fs::write(path, text)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<StepFunction> {
    let text = fs::read_to_string(path)?;
    match Format::from_path(path) {
        Format::Json => from_json(&text),
        Format::Csv => from_csv(&text),
    }
}
