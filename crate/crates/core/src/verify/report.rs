use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{validation, Result};

/// Relative slack applied to every `lhs <= rhs` comparison.
pub const RELATIVE_SLACK: f64 = 1e-9;

/// One evaluated instance of an inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    /// Which function, property or branch the row belongs to.
    pub case: String,
    pub params: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub margin: f64,
}

impl Row {
    pub fn new(case: impl Into<String>, params: &[(&str, f64)], lhs: f64, rhs: f64) -> Self {
        Self {
            case: case.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            lhs,
            rhs,
            margin: rhs - lhs,
        }
    }

    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs * (1.0 + RELATIVE_SLACK)
    }

    /// `lhs / rhs`, with `0/0 = 0` and `x/0 = ∞` for `x > 0`.
    pub fn ratio(&self) -> f64 {
        if self.lhs <= 0.0 {
            0.0
        } else if self.rhs <= 0.0 {
            f64::INFINITY
        } else {
            self.lhs / self.rhs
        }
    }
}

/// A minimal instance on which a property failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub property: String,
    pub dim: usize,
    pub depth: u32,
    pub values: Vec<f64>,
    pub cube: Option<crate::grid::DyadicCube>,
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub parameters: BTreeMap<String, f64>,
    pub rows: Vec<Row>,
    pub empirical_constant: Option<f64>,
    pub theoretical_constant: Option<f64>,
    pub pass: bool,
    /// Labels of the functions the report was computed on.
    pub corpus: Vec<String>,
    /// Additional observed quantities (ratios, growth factors).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>, parameters: &[(&str, f64)]) -> Self {
        Self {
            name: name.into(),
            parameters: parameters.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            rows: Vec::new(),
            empirical_constant: None,
            theoretical_constant: None,
            pass: false,
            corpus: Vec::new(),
            extras: BTreeMap::new(),
            counterexample: None,
        }
    }

    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn extra(&mut self, key: &str, value: f64) {
        self.extras.insert(key.to_string(), value);
    }

    /// Sets `pass` from the rows.
    pub fn finish(mut self) -> Self {
        self.pass = self.recomputed_pass();
        self
    }

    pub fn recomputed_pass(&self) -> bool {
        self.rows.iter().all(Row::holds)
    }

    /// The row with the largest `lhs / rhs` (first one on ties).
    pub fn worst_row(&self) -> Option<&Row> {
        self.rows.iter().fold(None, |worst: Option<&Row>, r| match worst {
            Some(w) if w.ratio() >= r.ratio() => Some(w),
            _ => Some(r),
        })
    }

    /// Merges per-function reports of one check: keeps each function's worst
    /// row, the largest empirical constant, and the first counterexample.
    pub fn aggregate(name: &str, parameters: &[(&str, f64)], parts: Vec<(String, Self)>) -> Self {
        let mut out = Self::new(name, parameters);
        let mut ratios = Vec::new();
        for (label, part) in parts {
            if let Some(row) = part.worst_row() {
                let mut row = row.clone();
                row.case = if row.case.is_empty() { label.clone() } else { format!("{label}/{}", row.case) };
                out.rows.push(row);
            }
            if let Some(e) = part.empirical_constant {
                out.empirical_constant = Some(out.empirical_constant.map_or(e, |m: f64| m.max(e)));
                ratios.push(e);
            }
            if out.theoretical_constant.is_none() {
                out.theoretical_constant = part.theoretical_constant;
            }
            if out.counterexample.is_none() {
                out.counterexample = part.counterexample;
            }
            out.corpus.push(label);
        }
        if !ratios.is_empty() {
            out.extra("empirical_min", ratios.iter().copied().fold(f64::INFINITY, f64::min));
            out.extra("empirical_max", ratios.iter().copied().fold(0.0, f64::max));
        }
        out.finish()
    }

    /// Flat CSV, one line per row.
    pub fn to_csv(&self) -> Result<String> {
        rows_to_csv(std::slice::from_ref(self))
    }
}

pub fn rows_to_csv(reports: &[VerificationReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check", "case", "params", "lhs", "rhs", "margin", "holds"])?;
    for report in reports {
        for row in &report.rows {
            let params = row
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(";");
            w.write_record([
                report.name.as_str(),
                row.case.as_str(),
                params.as_str(),
                &row.lhs.to_string(),
                &row.rhs.to_string(),
                &row.margin.to_string(),
                if row.holds() { "true" } else { "false" },
            ])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| crate::Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Geometric grid of `count` levels from `lo` to `hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaGrid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Points in the default grid.
pub const DEFAULT_LAMBDA_COUNT: usize = 40;

impl LambdaGrid {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi && count >= 1) {
            return Err(validation(format!(
                "lambda grid needs 0 < lo <= hi and count >= 1, got {lo}:{hi}:{count}"
            )));
        }
        Ok(Self { lo, hi, count })
    }

    /// `[max(floor, 1e-6 scale), 2 scale]` with 40 points; `scale = 0` gives `{1}`.
    pub fn default_for(floor: f64, scale: f64) -> Self {
        if scale <= 0.0 {
            return Self { lo: 1.0, hi: 1.0, count: 1 };
        }
        let lo = floor.max(1e-6 * scale);
        let hi = (2.0 * scale).max(lo);
        Self { lo, hi, count: DEFAULT_LAMBDA_COUNT }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 || self.lo == self.hi {
            return vec![self.lo];
        }
        let ratio = (self.hi / self.lo).ln() / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.hi
                } else {
                    self.lo * (ratio * i as f64).exp()
                }
            })
            .collect()
    }
}

impl std::str::FromStr for LambdaGrid {
    type Err = crate::Error;

    /// Parses `lo:hi:count`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || validation(format!("bad lambda grid '{s}', expected lo:hi:count"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo = parts[0].trim().parse().map_err(|_| bad())?;
        let hi = parts[1].trim().parse().map_err(|_| bad())?;
        let count = parts[2].trim().parse().map_err(|_| bad())?;
        Self::new(lo, hi, count)
    }
}
