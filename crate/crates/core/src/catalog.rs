//! Named functions that can be sampled onto a dyadic grid.
//!
//! Analytic entries depend on the first coordinate only. Each finest cell
//! receives either the value at its midpoint or the exact mean of the
//! function over the cell, computed from a closed-form antiderivative.
//!
//! | entry              | formula                              | default root  | exact mean |
//! |--------------------|--------------------------------------|---------------|------------|
//! | `constant`         | `c`                                  | `[0,1]^n`     | no         |
//! | `step`             | explicit row-major values            | `[0,1]^n`     | no         |
//! | `random-uniform`   | i.i.d. uniform on `[lo, hi)`         | `[0,1]^n`     | no         |
//! | `log-reciprocal`   | `log(1/x)`                           | `[0,1]^n`     | yes        |
//! | `power`            | `x^a`                                | `[0,1]^n`     | yes        |
//! | `jn-extremal`      | `χ_(0,1/2)(x) / (x log² x)`          | `[0,1/8]^n`   | yes        |
//! | `smooth-lipschitz` | `A sin(2π k x)`                      | `[0,1]^n`     | no         |
//!
//! `random-uniform` draws cells in row-major order from
//! `ChaCha8Rng::seed_from_u64(seed)`, so a seed fixes the function on every
//! platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{validation, Error, Result};
use crate::grid::{DyadicGrid, StepFunction};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "fn", rename_all = "kebab-case")]
pub enum CatalogEntry {
    Constant { c: f64 },
    Step { values: Vec<f64> },
    RandomUniform { lo: f64, hi: f64, seed: u64 },
    LogReciprocal,
    Power { exponent: f64 },
    JnExtremal,
    SmoothLipschitz { amplitude: f64, frequency: f64 },
}

impl CatalogEntry {
    pub fn name(&self) -> &'static str {
        match self {
            CatalogEntry::Constant { .. } => "constant",
            CatalogEntry::Step { .. } => "step",
            CatalogEntry::RandomUniform { .. } => "random-uniform",
            CatalogEntry::LogReciprocal => "log-reciprocal",
            CatalogEntry::Power { .. } => "power",
            CatalogEntry::JnExtremal => "jn-extremal",
            CatalogEntry::SmoothLipschitz { .. } => "smooth-lipschitz",
        }
    }

    /// Entries defined through `x1` only on `x1 >= 0`.
    fn needs_nonnegative_axis(&self) -> bool {
        matches!(
            self,
            CatalogEntry::LogReciprocal | CatalogEntry::Power { .. } | CatalogEntry::JnExtremal
        )
    }

    fn eval(&self, x: f64) -> f64 {
        match *self {
            CatalogEntry::LogReciprocal => -x.ln(),
            CatalogEntry::Power { exponent } => x.powf(exponent),
            CatalogEntry::JnExtremal => {
                if x > 0.0 && x < 0.5 {
                    let l = x.ln();
                    1.0 / (x * l * l)
                } else {
                    0.0
                }
            }
            CatalogEntry::SmoothLipschitz { amplitude, frequency } => {
                amplitude * (2.0 * std::f64::consts::PI * frequency * x).sin()
            }
            _ => unreachable!("pointwise evaluation of a non-analytic entry"),
        }
    }

    /// Mean over `[a, b]`, `0 <= a < b`, from the antiderivative.
    fn exact_mean(&self, a: f64, b: f64) -> Result<f64> {
        let mean = match *self {
            CatalogEntry::LogReciprocal => {
                // ∫ -ln x = x - x ln x, vanishing at 0
                let anti = |x: f64| if x == 0.0 { 0.0 } else { x - x * x.ln() };
                (anti(b) - anti(a)) / (b - a)
            }
            CatalogEntry::Power { exponent } => {
                if a == 0.0 && exponent <= -1.0 {
                    return Err(validation(format!(
                        "x^{exponent} is not integrable on a cell touching 0"
                    )));
                }
                if exponent == -1.0 {
                    (b / a).ln() / (b - a)
                } else {
                    let e = exponent + 1.0;
                    (b.powf(e) - a.powf(e)) / (e * (b - a))
                }
            }
            CatalogEntry::JnExtremal => {
                // d/dx (-1 / ln x) = 1 / (x ln² x); the indicator stops it at 1/2
                let anti = |x: f64| {
                    let x = x.min(0.5);
                    if x == 0.0 {
                        0.0
                    } else {
                        -1.0 / x.ln()
                    }
                };
                (anti(b) - anti(a)) / (b - a)
            }
            _ => {
                return Err(Error::Unsupported(format!(
                    "no closed-form cell average for '{}'",
                    self.name()
                )))
            }
        };
        Ok(mean)
    }

    /// Lipschitz constant along `x1`, where one is known.
    pub fn lipschitz_constant(&self) -> Option<f64> {
        match *self {
            CatalogEntry::Constant { .. } => Some(0.0),
            CatalogEntry::SmoothLipschitz { amplitude, frequency } => {
                Some(2.0 * std::f64::consts::PI * (amplitude * frequency).abs())
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingRule {
    #[default]
    Midpoint,
    ExactCellAverage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub origin: Vec<f64>,
    pub side: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    #[serde(flatten)]
    pub entry: CatalogEntry,
    /// Root cube; when absent the entry's default root is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Domain>,
    #[serde(default)]
    pub rule: SamplingRule,
}

impl FunctionSpec {
    pub fn new(entry: CatalogEntry) -> Self {
        Self { entry, domain: None, rule: SamplingRule::Midpoint }
    }

    pub fn with_rule(mut self, rule: SamplingRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn with_domain(mut self, origin: Vec<f64>, side: f64) -> Self {
        self.domain = Some(Domain { origin, side });
        self
    }

    /// The root cube in dimension `dim`.
    pub fn domain_for(&self, dim: usize) -> Domain {
        self.domain.clone().unwrap_or_else(|| Domain {
            origin: vec![0.0; dim],
            side: if self.entry == CatalogEntry::JnExtremal { 0.125 } else { 1.0 },
        })
    }

    /// A grid over this spec's root cube.
    pub fn grid(&self, dim: usize, depth: u32) -> Result<DyadicGrid> {
        let d = self.domain_for(dim);
        DyadicGrid::new(dim, depth, d.origin, d.side)
    }

    pub fn label(&self) -> String {
        let params = match &self.entry {
            CatalogEntry::Constant { c } => format!("c={c}"),
            CatalogEntry::Step { values } => format!("len={}", values.len()),
            CatalogEntry::RandomUniform { lo, hi, seed } => format!("lo={lo},hi={hi},seed={seed}"),
            CatalogEntry::Power { exponent } => format!("a={exponent}"),
            CatalogEntry::SmoothLipschitz { amplitude, frequency } => {
                format!("A={amplitude},k={frequency}")
            }
            CatalogEntry::LogReciprocal | CatalogEntry::JnExtremal => String::new(),
        };
        let rule = match self.rule {
            SamplingRule::Midpoint => "mid",
            SamplingRule::ExactCellAverage => "exact",
        };
        format!("{}({params})[{rule}]", self.entry.name())
    }
}

/// Samples a catalog function onto `grid`.
pub fn sample_catalog(spec: &FunctionSpec, grid: &DyadicGrid) -> Result<StepFunction> {
    if let Some(d) = &spec.domain {
        if d.origin != grid.origin() || d.side != grid.side() {
            return Err(validation(format!(
                "spec root (origin {:?}, side {}) does not match grid root (origin {:?}, side {})",
                d.origin,
                d.side,
                grid.origin(),
                grid.side()
            )));
        }
    }
    if spec.entry.needs_nonnegative_axis() && grid.origin()[0] < 0.0 {
        return Err(validation(format!(
            "'{}' is only defined for x1 >= 0, root starts at {}",
            spec.entry.name(),
            grid.origin()[0]
        )));
    }
    let n = grid.cell_count();
    let values = match (&spec.entry, spec.rule) {
        (CatalogEntry::Constant { c }, SamplingRule::Midpoint) => vec![*c; n],
        (CatalogEntry::Step { values }, SamplingRule::Midpoint) => values.clone(),
        (CatalogEntry::RandomUniform { lo, hi, seed }, SamplingRule::Midpoint) => {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(validation(format!("random-uniform needs lo <= hi, got {lo} > {hi}")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..n).map(|_| if lo == hi { *lo } else { rng.gen_range(*lo..*hi) }).collect()
        }
        (entry, SamplingRule::Midpoint) => {
            (0..n).map(|cell| entry.eval(grid.cell_midpoint(cell)[0])).collect()
        }
        (entry, SamplingRule::ExactCellAverage) => (0..n)
            .map(|cell| {
                let (lo, hi) = grid.cell_bounds(cell);
                entry.exact_mean(lo[0], hi[0])
            })
            .collect::<Result<Vec<_>>>()?,
    };
    StepFunction::new(grid.clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_fills_grid() {
        let spec = FunctionSpec::new(CatalogEntry::Constant { c: 3.0 });
        let f = sample_catalog(&spec, &DyadicGrid::unit(2, 2).unwrap()).unwrap();
        assert!(f.values().iter().all(|&v| v == 3.0));
    }

    #[test]
    fn jn_extremal_midpoints() {
        let spec = FunctionSpec::new(CatalogEntry::JnExtremal);
        let grid = spec.grid(1, 3).unwrap();
        assert_eq!(grid.side(), 0.125);
        let f = sample_catalog(&spec, &grid).unwrap();
        for (i, &v) in f.values().iter().enumerate() {
            let x = (2 * i + 1) as f64 / 128.0;
            let expected = 1.0 / (x * x.ln().powi(2));
            assert!((v - expected).abs() <= 1e-14 * expected, "cell {i}");
        }
        // first cell: x = 1/128, ln x = -7 ln 2
        let l = 7.0 * 2f64.ln();
        assert!((f.values()[0] - 128.0 / (l * l)).abs() < 1e-12);
    }

    #[test]
    fn power_exact_average_closed_form() {
        let spec = FunctionSpec::new(CatalogEntry::Power { exponent: -0.5 })
            .with_rule(SamplingRule::ExactCellAverage);
        let f = sample_catalog(&spec, &DyadicGrid::unit(1, 2).unwrap()).unwrap();
        for (i, &v) in f.values().iter().enumerate() {
            let (a, b) = (i as f64 / 4.0, (i + 1) as f64 / 4.0);
            let expected = 2.0 * (b.sqrt() - a.sqrt()) / (b - a);
            assert!((v - expected).abs() < 1e-14);
        }
        assert_eq!(f.values()[0], 4.0);
    }

    #[test]
    fn errors() {
        let grid = DyadicGrid::unit(1, 2).unwrap();
        let exact_const = FunctionSpec::new(CatalogEntry::Constant { c: 1.0 })
            .with_rule(SamplingRule::ExactCellAverage);
        assert!(matches!(sample_catalog(&exact_const, &grid), Err(Error::Unsupported(_))));

        let wrong_root = FunctionSpec::new(CatalogEntry::JnExtremal).with_domain(vec![0.0], 0.125);
        assert!(sample_catalog(&wrong_root, &grid).is_err());

        let negative = DyadicGrid::new(1, 2, vec![-1.0], 2.0).unwrap();
        assert!(sample_catalog(&FunctionSpec::new(CatalogEntry::LogReciprocal), &negative).is_err());

        let short = FunctionSpec::new(CatalogEntry::Step { values: vec![1.0, 2.0] });
        assert!(matches!(sample_catalog(&short, &grid), Err(Error::LengthMismatch { .. })));

        let divergent = FunctionSpec::new(CatalogEntry::Power { exponent: -1.5 })
            .with_rule(SamplingRule::ExactCellAverage);
        assert!(sample_catalog(&divergent, &grid).is_err());
    }

    #[test]
    fn random_uniform_is_seeded() {
        let grid = DyadicGrid::unit(1, 4).unwrap();
        let spec = |seed| FunctionSpec::new(CatalogEntry::RandomUniform { lo: -1.0, hi: 2.0, seed });
        let a = sample_catalog(&spec(7), &grid).unwrap();
        let b = sample_catalog(&spec(7), &grid).unwrap();
        let c = sample_catalog(&spec(8), &grid).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.values().iter().all(|&v| (-1.0..2.0).contains(&v)));
    }

    #[test]
    fn spec_json_shape() {
        let spec = FunctionSpec::new(CatalogEntry::Power { exponent: -0.5 })
            .with_rule(SamplingRule::ExactCellAverage);
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"fn":"power","exponent":-0.5,"rule":"exact-cell-average"}"#);
        let back: FunctionSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        let back: FunctionSpec = serde_json::from_str(r#"{"fn":"jn-extremal"}"#).unwrap();
        assert_eq!(back.rule, SamplingRule::Midpoint);
    }
}
