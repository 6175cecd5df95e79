//! Randomized checks of the order properties of maximal medians, and the
//! differentiation check for Lipschitz functions.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{sample_catalog, CatalogEntry, FunctionSpec};
use crate::error::{validation, Result};
use crate::grid::{DyadicCube, DyadicGrid, StepFunction};
use crate::median::{maximal_median_of, median_table};

use super::report::{Counterexample, Row, VerificationReport};

/// Absolute tolerance on every property defect.
pub const PROPERTY_TOLERANCE: f64 = 1e-12;

/// Parameters at which each property is exercised.
pub const PROPERTY_FRACTIONS: [f64; 7] = [1.0 / 16.0, 0.125, 0.25, 1.0 / 3.0, 0.5, 0.75, 1.0];

pub const PROPERTY_NAMES: [&str; 11] = [
    "monotone-in-s",
    "monotone-in-f",
    "parent-nesting",
    "increasing-composition",
    "shift",
    "positive-scaling",
    "absolute-value",
    "subadditivity",
    "lp-bound",
    "disjoint-union",
    "threshold-scan",
];

/// Literal evaluation of `inf { a : #{v > a} < s m }` over the candidate
/// thresholds `a ∈ values`; the infimum is attained at one of them.
pub fn threshold_scan_median(values: &[f64], s: f64) -> f64 {
    let m = values.len() as f64;
    values
        .iter()
        .copied()
        .filter(|&a| (values.iter().filter(|&&v| v > a).count() as f64) < s * m)
        .fold(f64::INFINITY, f64::min)
}

/// Random instance for property checks. Odd seeds draw continuous values,
/// even seeds small integers so that ties are frequent.
pub fn random_instance(seed: u64, dim: usize, depth: u32) -> Result<(StepFunction, StepFunction)> {
    let grid = DyadicGrid::unit(dim, depth)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.cell_count();
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        if seed.is_multiple_of(2) {
            (0..n).map(|_| rng.gen_range(-3i32..=3) as f64).collect()
        } else {
            (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect()
        }
    };
    let f = draw(&mut rng);
    let g = draw(&mut rng);
    Ok((StepFunction::new(grid.clone(), f)?, StepFunction::new(grid, g)?))
}

struct Tracker {
    defects: BTreeMap<&'static str, f64>,
    counterexample: Option<Counterexample>,
}

impl Tracker {
    fn new() -> Self {
        Self { defects: PROPERTY_NAMES.iter().map(|n| (*n, 0.0)).collect(), counterexample: None }
    }

    fn record(&mut self, property: &'static str, defect: f64, f: &StepFunction, cube: &DyadicCube, params: &[(&str, f64)]) {
        let slot = self.defects.get_mut(property).expect("known property");
        // a NaN defect counts as a violation
        let defect = if defect.is_nan() { f64::INFINITY } else { defect };
        *slot = slot.max(defect);
        if defect > PROPERTY_TOLERANCE && self.counterexample.is_none() {
            self.counterexample = Some(Counterexample {
                property: property.to_string(),
                dim: f.grid().dim(),
                depth: f.grid().depth(),
                values: f.values().to_vec(),
                cube: Some(cube.clone()),
                params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            });
        }
    }
}

fn excess(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).max(0.0)
}

fn check_instance(f: &StepFunction, g: &StepFunction, tracker: &mut Tracker) -> Result<()> {
    let grid = f.grid();
    let fan = 1usize << grid.dim();
    let bumped = f.zip_with(g, |a, b| a + b.abs())?;
    let sum = f.zip_with(g, |a, b| a + b)?;
    let (a, b, shift, scale) = (2.5, -1.25, 1.75, 3.0);
    for cube in grid.all_cubes() {
        let v = f.cube_values(&cube)?;
        let w = g.cube_values(&cube)?;
        let abs: Vec<f64> = v.iter().map(|x| x.abs()).collect();
        let med = |s: f64| maximal_median_of(&v, s);
        let m_len = v.len() as f64;
        for (i, &s) in PROPERTY_FRACTIONS.iter().enumerate() {
            let params = [("s", s)];
            let ms = med(s);
            if let Some(&next) = PROPERTY_FRACTIONS.get(i + 1) {
                tracker.record("monotone-in-s", excess(med(next), ms), f, &cube, &[("s", s), ("s_prime", next)]);
            }
            let bigger = maximal_median_of(&bumped.cube_values(&cube)?, s);
            tracker.record("monotone-in-f", excess(ms, bigger), f, &cube, &params);

            if let Some(parent) = cube.parent() {
                let up = maximal_median_of(&f.cube_values(&parent)?, s / fan as f64);
                tracker.record("parent-nesting", excess(ms, up), f, &cube, &params);
            }

            let exp: Vec<f64> = v.iter().map(|x| x.exp()).collect();
            let affine: Vec<f64> = v.iter().map(|x| a * x + b).collect();
            let d = (maximal_median_of(&exp, s) - ms.exp()).abs()
                .max((maximal_median_of(&affine, s) - (a * ms + b)).abs());
            tracker.record("increasing-composition", d, f, &cube, &params);

            let shifted: Vec<f64> = v.iter().map(|x| x + shift).collect();
            tracker.record("shift", (maximal_median_of(&shifted, s) - (ms + shift)).abs(), f, &cube, &params);
            let scaled: Vec<f64> = v.iter().map(|x| scale * x).collect();
            tracker.record("positive-scaling", (maximal_median_of(&scaled, s) - scale * ms).abs(), f, &cube, &params);

            // the bound involves m^{min(s, 1-s)}, which needs s < 1
            if s < 1.0 {
                let rhs = maximal_median_of(&abs, s.min(1.0 - s));
                tracker.record("absolute-value", excess(ms.abs(), rhs), f, &cube, &params);
            }

            let both = maximal_median_of(&sum.cube_values(&cube)?, s);
            for (t1, t2) in [(s / 2.0, s / 2.0), (s / 4.0, 3.0 * s / 4.0)] {
                let rhs = med(t1) + maximal_median_of(&w, t2);
                tracker.record("subadditivity", excess(both, rhs), f, &cube, &[("s", s), ("t1", t1), ("t2", t2)]);
            }

            let m_abs = maximal_median_of(&abs, s);
            for p in [1.0, 2.0] {
                let mean = abs.iter().map(|x| x.powf(p)).sum::<f64>() / m_len;
                let rhs = (mean / s).powf(1.0 / p);
                tracker.record("lp-bound", excess(m_abs, rhs), f, &cube, &[("s", s), ("p", p)]);
            }

            if cube.level < grid.depth() {
                let kids = cube
                    .children()
                    .map(|c| Ok(maximal_median_of(&f.cube_values(&c)?, s)))
                    .collect::<Result<Vec<f64>>>()?;
                let lo = kids.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = kids.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                tracker.record("disjoint-union", excess(lo, ms).max(excess(ms, hi)), f, &cube, &params);
            }

            let scan = threshold_scan_median(&v, s);
            tracker.record("threshold-scan", (scan - ms).abs(), f, &cube, &params);
        }
    }
    Ok(())
}

/// Runs every property on `seed_count` random instances; instance `i` uses
/// seed `i`, dimension `dims[i % dims.len()]` and depth
/// `depths[(i / dims.len()) % depths.len()]`. One row per property:
/// `lhs` is the largest defect observed, `rhs` the tolerance.
pub fn run_median_property_suite(seed_count: u64, dims: &[usize], depths: &[u32]) -> Result<VerificationReport> {
    if seed_count == 0 || dims.is_empty() || depths.is_empty() {
        return Err(validation("property suite needs at least one seed, dimension and depth"));
    }
    let mut tracker = Tracker::new();
    for seed in 0..seed_count {
        let i = seed as usize;
        let dim = dims[i % dims.len()];
        let depth = depths[(i / dims.len()) % depths.len()];
        let (f, g) = random_instance(seed, dim, depth)?;
        check_instance(&f, &g, &mut tracker)?;
    }
    let mut report = VerificationReport::new("median-properties", &[("seeds", seed_count as f64)]);
    for name in PROPERTY_NAMES {
        report.push(Row::new(name, &[], tracker.defects[name], PROPERTY_TOLERANCE));
    }
    report.corpus = vec![format!(
        "random seeds 0..{seed_count}, dims {dims:?}, depths {depths:?}"
    )];
    report.counterexample = tracker.counterexample;
    Ok(report.finish())
}

/// For a Lipschitz catalog entry with constant `L` sampled at depth `J`:
/// for each level `j` and each `s`, the largest
/// `|m^s_f(Q_j(x)) - f(x_cell)|` over cells, against `L diam(Q_j)`.
pub fn verify_differentiation(spec: &FunctionSpec, depth: u32, fractions: &[f64]) -> Result<VerificationReport> {
    let lipschitz = spec.entry.lipschitz_constant().ok_or_else(|| {
        validation(format!("'{}' has no known Lipschitz constant", spec.entry.name()))
    })?;
    let grid = spec.grid(1, depth)?;
    let f = sample_catalog(spec, &grid)?;
    let mut report = VerificationReport::new("differentiation", &[("L", lipschitz), ("depth", depth as f64)]);
    for &s in fractions {
        let table = median_table(&f, s)?;
        for level in 0..=depth {
            let err = (0..grid.cell_count())
                .map(|cell| (table.get(&grid.ancestor_of_cell(cell, level)) - f.values()[cell]).abs())
                .fold(0.0, f64::max);
            let bound = lipschitz * grid.cube_diameter(level);
            report.push(Row::new("", &[("s", s), ("level", level as f64)], err, bound));
        }
    }
    report.corpus = vec![spec.label()];
    Ok(report.finish())
}

/// The differentiation check on `sin(2πx)`.
pub fn sine_differentiation(depth: u32) -> Result<VerificationReport> {
    let spec = FunctionSpec::new(CatalogEntry::SmoothLipschitz { amplitude: 1.0, frequency: 1.0 });
    verify_differentiation(&spec, depth, &[0.25, 0.5])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_scan_examples() {
        assert_eq!(threshold_scan_median(&[1.0, 2.0, 3.0, 4.0], 0.5), 3.0);
        assert_eq!(threshold_scan_median(&[0.0, 1.0, 1.0, 0.0], 0.6), 0.0);
    }

    #[test]
    fn small_suite_passes() {
        let r = run_median_property_suite(40, &[1, 2], &[3, 2]).unwrap();
        assert!(r.pass, "{:?}", r.counterexample);
        assert_eq!(r.rows.len(), PROPERTY_NAMES.len());
    }

    #[test]
    fn constant_corpus_has_zero_defects() {
        let grid = DyadicGrid::unit(1, 3).unwrap();
        let f = StepFunction::constant(grid, 2.0).unwrap();
        let mut t = Tracker::new();
        check_instance(&f, &f, &mut t).unwrap();
        assert!(t.defects.values().all(|&d| d == 0.0));
    }

    #[test]
    fn sine_errors_within_bound() {
        let r = sine_differentiation(6).unwrap();
        assert!(r.pass);
        assert!(r.rows.iter().filter(|row| row.params["level"] == 6.0).all(|row| row.lhs == 0.0));
    }
}
