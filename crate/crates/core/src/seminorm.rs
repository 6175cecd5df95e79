//! Dyadic John–Nirenberg seminorms.
//!
//! `‖f‖^p = sup Σ_i |Q_i| osc(Q_i)^p` over collections of pairwise disjoint
//! dyadic cubes. Dyadic cubes are pairwise disjoint exactly when none is an
//! ancestor of another, so the admissible collections are the antichains of
//! the dyadic tree. Weights are nonnegative, which gives the recursion
//!
//! ```text
//! best(Q) = max( w(Q), Σ_{children C} best(C) )
//! ```
//!
//! evaluated bottom-up. Cubes below the finest level carry constant values
//! and weight zero, so countable collections reduce to finite antichains of
//! the grid's own tree and the recursion is exact.
//!
//! Three oscillations are supported:
//!
//! * `avg-mean`: `avg_Q |f - f_Q|`;
//! * `med-optimal`: `inf_c m^s_{|f - c|}(Q)`, the median-type seminorm;
//! * `med-center`: `m^s_{|f - m^t_f(Q)|}(Q)`, a fixed-center variant that is
//!   comparable to `med-optimal` within a factor 2.

use serde::{Deserialize, Serialize};

use crate::czd::CubeCollection;
use crate::error::{validation, Error, Result};
use crate::grid::{DyadicCube, StepFunction};
use crate::median::{
    check_half, check_oscillation_params, kth_largest, maximal_median_sorted, median_rank,
    min_center_oscillation_sorted,
};
use crate::tree::{CubeTable, Layout};

/// Weights below this fraction of the largest weight are treated as zero.
pub const WEIGHT_DUST: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Mode {
    AvgMean,
    MedOptimal { s: f64 },
    MedCenter { s: f64, t: f64 },
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::AvgMean => "avg-mean",
            Mode::MedOptimal { .. } => "med-optimal",
            Mode::MedCenter { .. } => "med-center",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeminormConfig {
    pub p: f64,
    #[serde(flatten)]
    pub mode: Mode,
}

impl SeminormConfig {
    pub fn avg_mean(p: f64) -> Self {
        Self { p, mode: Mode::AvgMean }
    }

    pub fn med_optimal(p: f64, s: f64) -> Self {
        Self { p, mode: Mode::MedOptimal { s } }
    }

    pub fn med_center(p: f64, s: f64, t: f64) -> Self {
        Self { p, mode: Mode::MedCenter { s, t } }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p.is_finite() && self.p > 1.0) {
            return Err(validation(format!("p must be a finite number > 1, got {}", self.p)));
        }
        match self.mode {
            Mode::AvgMean => Ok(()),
            Mode::MedOptimal { s } => check_half("s", s),
            Mode::MedCenter { s, t } => check_oscillation_params(s, t),
        }
    }
}

/// Oscillation of an ascending slice of equally weighted values.
pub fn oscillation_sorted(sorted: &[f64], mode: Mode) -> f64 {
    match mode {
        Mode::AvgMean => {
            let m = sorted.len() as f64;
            let mean = sorted.iter().sum::<f64>() / m;
            sorted.iter().map(|v| (v - mean).abs()).sum::<f64>() / m
        }
        Mode::MedOptimal { s } => min_center_oscillation_sorted(sorted, s).0,
        Mode::MedCenter { s, t } => {
            let center = maximal_median_sorted(sorted, t);
            let mut dev: Vec<f64> = sorted.iter().map(|v| (v - center).abs()).collect();
            kth_largest(&mut dev, median_rank(s, sorted.len()))
        }
    }
}

/// `|Q| osc(Q)^p`.
pub fn cube_weight(f: &StepFunction, cube: &DyadicCube, cfg: &SeminormConfig) -> Result<f64> {
    cfg.validate()?;
    let mut values = f.cube_values(cube)?;
    values.sort_by(f64::total_cmp);
    let measure = f.grid().cube_measure(cube.level);
    Ok(measure * oscillation_sorted(&values, cfg.mode).powf(cfg.p))
}

/// Weights of every cube, with floating-point dust clamped to zero.
pub fn weight_table(f: &StepFunction, cfg: &SeminormConfig) -> Result<CubeTable<f64>> {
    cfg.validate()?;
    let grid = f.grid();
    let layout = Layout::new(grid);
    let mut table = layout.table_from_sorted(f, |level, block| {
        grid.cube_measure(level) * oscillation_sorted(block, cfg.mode).powf(cfg.p)
    });
    let scale = (0..=grid.depth())
        .flat_map(|j| table.level(j).iter().copied())
        .fold(0.0, f64::max);
    let floor = WEIGHT_DUST * scale;
    table.map_in_place(|w| if w < floor { 0.0 } else { w });
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubeWeight {
    pub cube: DyadicCube,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeminormReport {
    pub config: SeminormConfig,
    /// The seminorm, `value_pow^{1/p}`.
    pub value: f64,
    /// The optimal sum `Σ |Q_i| osc(Q_i)^p`.
    pub value_pow: f64,
    pub optimum: CubeCollection,
    pub per_cube_weights: Vec<CubeWeight>,
}

impl SeminormReport {
    fn from_optimum(
        cfg: SeminormConfig,
        value_pow: f64,
        chosen: Vec<DyadicCube>,
        weights: &CubeTable<f64>,
    ) -> Self {
        let optimum = CubeCollection::new(chosen);
        let per_cube_weights = optimum
            .cubes()
            .iter()
            .map(|c| CubeWeight { cube: c.clone(), weight: *weights.get(c) })
            .collect();
        Self {
            config: cfg,
            value: value_pow.powf(1.0 / cfg.p),
            value_pow,
            optimum,
            per_cube_weights,
        }
    }
}

/// Exact seminorm by the bottom-up antichain recursion.
///
/// When a cube's weight equals the sum over its children, the children are
/// kept, so the reported optimum is the deepest one among ties.
pub fn jn_seminorm(f: &StepFunction, cfg: &SeminormConfig) -> Result<SeminormReport> {
    let weights = weight_table(f, cfg)?;
    let depth = f.grid().depth();
    let mut best: Vec<Vec<f64>> = vec![Vec::new(); depth as usize + 1];
    let mut take: Vec<Vec<bool>> = vec![Vec::new(); depth as usize + 1];

    best[depth as usize] = weights.level(depth).to_vec();
    take[depth as usize] = weights.level(depth).iter().map(|&w| w > 0.0).collect();
    for level in (0..depth).rev() {
        let below = &best[level as usize + 1];
        let (b, t): (Vec<f64>, Vec<bool>) = weights
            .level(level)
            .iter()
            .enumerate()
            .map(|(block, &w)| {
                let children: f64 =
                    weights.children_range(block).map(|c| below[c]).fold(0.0, |acc, x| acc + x);
                if w > children {
                    (w, true)
                } else {
                    (children, false)
                }
            })
            .unzip();
        best[level as usize] = b;
        take[level as usize] = t;
    }

    let mut chosen = Vec::new();
    let mut stack = vec![(0u32, 0usize)];
    while let Some((level, block)) = stack.pop() {
        if take[level as usize][block] {
            chosen.push(weights.cube_at(level, block));
        } else if level < depth {
            stack.extend(weights.children_range(block).map(|c| (level + 1, c)));
        }
    }
    Ok(SeminormReport::from_optimum(*cfg, best[0][0], chosen, &weights))
}

/// Largest instances accepted by [`jn_seminorm_bruteforce`], by dimension.
pub fn bruteforce_max_depth(dim: usize) -> u32 {
    match dim {
        1 => 4,
        2 => 2,
        _ => 1,
    }
}

/// Every antichain of one subtree, as totals. Entry 0 selects the subtree's
/// root; entry `1 + r` combines child entries given by the mixed-radix digits
/// of `r` (first child most significant). Leaves have a second entry, the
/// empty collection.
struct Enumerated {
    totals: Vec<f64>,
}

/// Exact seminorm by enumerating every antichain of the dyadic tree.
///
/// Each antichain's total is summed along the tree in child order, the same
/// order as [`jn_seminorm`]; with monotone rounding the two maxima agree to
/// the last bit. Limited to `n = 1, J <= 4`, `n = 2, J <= 2`, `n = 3, J <= 1`
/// (458330, 83522 and 257 antichains).
pub fn jn_seminorm_bruteforce(f: &StepFunction, cfg: &SeminormConfig) -> Result<SeminormReport> {
    let grid = f.grid();
    if grid.depth() > bruteforce_max_depth(grid.dim()) {
        return Err(Error::Resource(format!(
            "antichain enumeration limited to depth {} in dimension {}, got depth {}",
            bruteforce_max_depth(grid.dim()),
            grid.dim(),
            grid.depth()
        )));
    }
    let weights = weight_table(f, cfg)?;
    let depth = grid.depth();
    let fan = 1usize << grid.dim();

    let mut levels: Vec<Vec<Enumerated>> = (0..=depth).map(|_| Vec::new()).collect();
    levels[depth as usize] = weights
        .level(depth)
        .iter()
        .map(|&w| Enumerated { totals: vec![w, 0.0] })
        .collect();
    for level in (0..depth).rev() {
        let below = &levels[level as usize + 1];
        let nodes = weights
            .level(level)
            .iter()
            .enumerate()
            .map(|(block, &w)| {
                let kids: Vec<&Enumerated> = weights.children_range(block).map(|c| &below[c]).collect();
                let combos: usize = kids.iter().map(|k| k.totals.len()).product();
                let mut totals = Vec::with_capacity(combos + 1);
                totals.push(w);
                for r in 0..combos {
                    let digits = mixed_radix(r, &kids);
                    let sum = kids
                        .iter()
                        .zip(&digits)
                        .map(|(k, &d)| k.totals[d])
                        .fold(0.0, |acc, x| acc + x);
                    totals.push(sum);
                }
                Enumerated { totals }
            })
            .collect();
        levels[level as usize] = nodes;
    }

    let root = &levels[0][0].totals;
    let (arg, &value_pow) = root
        .iter()
        .enumerate()
        .fold((0, &f64::NEG_INFINITY), |acc, (i, v)| if *v > *acc.1 { (i, v) } else { acc });

    let mut chosen = Vec::new();
    let mut stack = vec![(0u32, 0usize, arg)];
    while let Some((level, block, entry)) = stack.pop() {
        if entry == 0 {
            chosen.push(weights.cube_at(level, block));
        } else if level < depth {
            let kids: Vec<&Enumerated> = weights
                .children_range(block)
                .map(|c| &levels[level as usize + 1][c])
                .collect();
            let digits = mixed_radix(entry - 1, &kids);
            for (i, d) in digits.into_iter().enumerate() {
                stack.push((level + 1, block * fan + i, d));
            }
        }
    }
    Ok(SeminormReport::from_optimum(*cfg, value_pow, chosen, &weights))
}

fn mixed_radix(mut r: usize, kids: &[&Enumerated]) -> Vec<usize> {
    let mut digits = vec![0; kids.len()];
    for (i, k) in kids.iter().enumerate().rev() {
        let radix = k.totals.len();
        digits[i] = r % radix;
        r /= radix;
    }
    digits
}

/// Norms of a step function used alongside the JN seminorms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompanionNorms {
    pub p: f64,
    pub l1: f64,
    pub lp: f64,
    /// `sup_λ λ |{|f| > λ}|^{1/p}`.
    pub weak_lp: f64,
    /// `∫ |f| max(log |f|, 0)`.
    pub llogl: f64,
    /// `max_Q avg_Q |f - f_Q|` over dyadic cubes.
    pub dyadic_bmo: f64,
}

pub fn companion_norms(f: &StepFunction, p: f64) -> Result<CompanionNorms> {
    if !(p.is_finite() && p > 1.0) {
        return Err(validation(format!("p must be a finite number > 1, got {p}")));
    }
    let cell = f.grid().cell_measure();
    let abs: Vec<f64> = f.values().iter().map(|v| v.abs()).collect();
    let l1 = abs.iter().sum::<f64>() * cell;
    let lp = (abs.iter().map(|v| v.powf(p)).sum::<f64>() * cell).powf(1.0 / p);
    let llogl = abs.iter().map(|&v| v * v.ln().max(0.0)).sum::<f64>() * cell;

    // the supremum is approached as λ increases to a value of |f|
    let mut sorted = abs;
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut weak_lp: f64 = 0.0;
    for (i, &a) in sorted.iter().enumerate() {
        let last_of_run = i + 1 == sorted.len() || sorted[i + 1] < a;
        if a > 0.0 && last_of_run {
            weak_lp = weak_lp.max(a * ((i + 1) as f64 * cell).powf(1.0 / p));
        }
    }

    let layout = Layout::new(f.grid());
    let osc = layout.table_from_sorted(f, |_, block| oscillation_sorted(block, Mode::AvgMean));
    let dyadic_bmo = (0..=f.grid().depth())
        .flat_map(|j| osc.level(j).iter().copied())
        .fold(0.0, f64::max);

    Ok(CompanionNorms { p, l1, lp, weak_lp, llogl, dyadic_bmo })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DyadicGrid;

    fn line(values: &[f64]) -> StepFunction {
        let grid = DyadicGrid::unit(1, values.len().trailing_zeros()).unwrap();
        StepFunction::new(grid, values.to_vec()).unwrap()
    }

    #[test]
    fn cube_weight_examples() {
        let root = DyadicCube::root(1);
        let c = line(&[2.0; 4]);
        for cfg in [
            SeminormConfig::avg_mean(2.0),
            SeminormConfig::med_optimal(2.0, 0.25),
            SeminormConfig::med_center(3.0, 0.1, 0.5),
        ] {
            assert_eq!(cube_weight(&c, &root, &cfg).unwrap(), 0.0);
        }
        let f = line(&[0.0, 1.0]);
        assert_eq!(cube_weight(&f, &root, &SeminormConfig::avg_mean(2.0)).unwrap(), 0.25);
        assert_eq!(cube_weight(&f, &root, &SeminormConfig::med_optimal(2.0, 0.5)).unwrap(), 0.25);
        assert_eq!(cube_weight(&f, &root, &SeminormConfig::med_center(2.0, 0.5, 0.5)).unwrap(), 1.0);
    }

    #[test]
    fn config_validation() {
        assert!(SeminormConfig::avg_mean(1.0).validate().is_err());
        assert!(SeminormConfig::avg_mean(f64::INFINITY).validate().is_err());
        assert!(SeminormConfig::med_optimal(2.0, 0.6).validate().is_err());
        assert!(SeminormConfig::med_center(2.0, 0.3, 0.2).validate().is_err());
        assert!(SeminormConfig::med_center(2.0, 0.2, 0.3).validate().is_ok());
    }

    #[test]
    fn seminorm_examples() {
        let r = jn_seminorm(&line(&[5.0; 8]), &SeminormConfig::avg_mean(2.0)).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.optimum.is_empty());

        let r = jn_seminorm(&line(&[0.0, 1.0]), &SeminormConfig::avg_mean(2.0)).unwrap();
        assert_eq!(r.value, 0.5);
        assert_eq!(r.optimum.cubes(), &[DyadicCube::root(1)]);

        let r = jn_seminorm(&line(&[0.0, 1.0, 0.0, 1.0]), &SeminormConfig::avg_mean(2.0)).unwrap();
        assert_eq!(r.value, 0.5);
        assert_eq!(
            r.optimum.cubes(),
            &[DyadicCube::new(1, vec![0]), DyadicCube::new(1, vec![1])]
        );
        assert_eq!(r.per_cube_weights[0].weight, 0.125);
    }

    #[test]
    fn bruteforce_examples() {
        let cfg = SeminormConfig::avg_mean(2.0);
        assert_eq!(jn_seminorm_bruteforce(&line(&[1.0; 16]), &cfg).unwrap().value, 0.0);
        assert_eq!(jn_seminorm_bruteforce(&line(&[0.0, 1.0]), &cfg).unwrap().value, 0.5);
        assert!(matches!(
            jn_seminorm_bruteforce(&line(&[0.0; 32]), &cfg),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn companion_examples() {
        let n = companion_norms(&line(&[-3.0; 4]), 2.0).unwrap();
        assert_eq!(n.l1, 3.0);
        assert_eq!(n.dyadic_bmo, 0.0);

        let n = companion_norms(&line(&[0.0, 1.0]), 2.0).unwrap();
        assert_eq!(n.l1, 0.5);
        assert_eq!(n.lp, 0.5f64.sqrt());
        assert_eq!(n.dyadic_bmo, 0.5);

        let n = companion_norms(&line(&[0.0, 0.0, 0.0, 2.0]), 2.0).unwrap();
        assert_eq!(n.weak_lp, 1.0);
        assert_eq!(n.llogl, 0.25 * 2.0 * 2f64.ln());
    }
}
