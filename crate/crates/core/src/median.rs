//! Maximal `s`-medians and median-based oscillations.
//!
//! For a set `A` and `0 < s <= 1` the maximal `s`-median is
//! `m_f^s(A) = inf { a : |{f > a}| < s |A| }`.
//!
//! On a dyadic cube every finest cell has the same measure, so with `m`
//! cells this reads `inf { a : #{v_i > a} < s m }`. Sort the cell values
//! descending, `w_1 >= w_2 >= .. >= w_m`, with repetitions, and put
//! `k = ceil(s m)`:
//!
//! * `a = w_k` is admissible: at most `k - 1` values are strictly larger,
//!   and `k - 1 < s m` by the choice of `k`.
//! * any `a < w_k` is not: `w_1, .., w_k` are all strictly larger, and
//!   `k >= s m`.
//!
//! Hence `m_f^s = w_k`, the `k`-th largest value. The argument only counts
//! values strictly above `a`, so repeated values need no special handling.
//! Since `m` is a power of two, `s m` is computed without rounding.
//!
//! The optimal-center oscillation `inf_c m^s_{|f - c|}` is the smallest
//! `a` for which some interval `[c - a, c + a]` contains at least
//! `q = m - k + 1` of the values, i.e. half the width of the narrowest window
//! of `q` consecutive sorted values.

use crate::error::{validation, Result};
use crate::grid::{DyadicCube, StepFunction};
use crate::tree::{CubeTable, Layout};

/// Median parameters as accepted by the command line front end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MedianParams {
    pub s: f64,
    pub t: Option<f64>,
    pub r: Option<f64>,
}

impl MedianParams {
    pub fn validate(&self) -> Result<()> {
        check_fraction("s", self.s)?;
        if let Some(t) = self.t {
            check_fraction("t", t)?;
        }
        if let Some(r) = self.r {
            check_fraction("r", r)?;
        }
        Ok(())
    }
}

/// Checks `0 < value <= 1`.
pub fn check_fraction(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value <= 1.0 {
        Ok(())
    } else {
        Err(validation(format!("{name} must lie in (0, 1], got {value}")))
    }
}

/// Checks `0 < s <= t <= 1/2`.
pub fn check_oscillation_params(s: f64, t: f64) -> Result<()> {
    if s > 0.0 && s <= t && t <= 0.5 {
        Ok(())
    } else {
        Err(validation(format!("median oscillation needs 0 < s <= t <= 1/2, got s = {s}, t = {t}")))
    }
}

pub(crate) fn check_half(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value <= 0.5 {
        Ok(())
    } else {
        Err(validation(format!("{name} must lie in (0, 1/2], got {value}")))
    }
}

/// `k = ceil(s m)`, clamped to `1..=m`.
pub fn median_rank(s: f64, m: usize) -> usize {
    ((s * m as f64).ceil() as usize).clamp(1, m)
}

/// `k`-th largest element (1-based) by partial selection; reorders `values`.
pub fn kth_largest(values: &mut [f64], k: usize) -> f64 {
    let m = values.len();
    let (_, nth, _) = values.select_nth_unstable_by(m - k, f64::total_cmp);
    *nth
}

/// Maximal `s`-median of equally weighted values.
pub fn maximal_median_of(values: &[f64], s: f64) -> f64 {
    let mut buf = values.to_vec();
    kth_largest(&mut buf, median_rank(s, values.len()))
}

/// Maximal `s`-median of an ascending slice.
pub fn maximal_median_sorted(sorted: &[f64], s: f64) -> f64 {
    sorted[sorted.len() - median_rank(s, sorted.len())]
}

pub fn maximal_median(f: &StepFunction, cube: &DyadicCube, s: f64) -> Result<f64> {
    check_fraction("s", s)?;
    Ok(maximal_median_of(&f.cube_values(cube)?, s))
}

/// `m^s_f(Q)` for every dyadic cube, from level-sorted blocks.
pub fn median_table(f: &StepFunction, s: f64) -> Result<CubeTable<f64>> {
    check_fraction("s", s)?;
    let layout = Layout::new(f.grid());
    Ok(layout.table_from_sorted(f, |_, block| maximal_median_sorted(block, s)))
}

/// `m^s_{|v - m^t_v|}` for equally weighted values.
pub fn median_oscillation_of(values: &[f64], s: f64, t: f64) -> f64 {
    let center = maximal_median_of(values, t);
    let mut dev: Vec<f64> = values.iter().map(|v| (v - center).abs()).collect();
    kth_largest(&mut dev, median_rank(s, values.len()))
}

pub fn median_oscillation(f: &StepFunction, cube: &DyadicCube, s: f64, t: f64) -> Result<f64> {
    check_oscillation_params(s, t)?;
    Ok(median_oscillation_of(&f.cube_values(cube)?, s, t))
}

/// `(inf_c m^s_{|v - c|}, argmin c)` for an ascending slice; the leftmost
/// minimizing window wins ties.
pub fn min_center_oscillation_sorted(sorted: &[f64], s: f64) -> (f64, f64) {
    let m = sorted.len();
    let q = m - median_rank(s, m) + 1;
    let mut best = (f64::INFINITY, 0);
    for i in 0..=(m - q) {
        let width = sorted[i + q - 1] - sorted[i];
        if width < best.0 {
            best = (width, i);
        }
    }
    let (lo, hi) = (sorted[best.1], sorted[best.1 + q - 1]);
    ((hi - lo) / 2.0, lo + (hi - lo) / 2.0)
}

pub fn min_center_oscillation(f: &StepFunction, cube: &DyadicCube, s: f64) -> Result<(f64, f64)> {
    check_half("s", s)?;
    let mut values = f.cube_values(cube)?;
    values.sort_by(f64::total_cmp);
    Ok(min_center_oscillation_sorted(&values, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DyadicGrid;

    fn on_root(values: &[f64]) -> (StepFunction, DyadicCube) {
        let depth = values.len().trailing_zeros();
        let grid = DyadicGrid::unit(1, depth).unwrap();
        (StepFunction::new(grid, values.to_vec()).unwrap(), DyadicCube::root(1))
    }

    #[test]
    fn maximal_median_examples() {
        let (f, q) = on_root(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(maximal_median(&f, &q, 0.5).unwrap(), 3.0);
        assert_eq!(maximal_median(&f, &q, 0.25).unwrap(), 4.0);
        assert_eq!(maximal_median(&f, &q, 1.0).unwrap(), 1.0);

        let (f, q) = on_root(&[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(maximal_median(&f, &q, 0.5).unwrap(), 1.0);
        assert_eq!(maximal_median(&f, &q, 0.6).unwrap(), 0.0);

        let (f, q) = on_root(&[7.5; 8]);
        for s in [0.01, 0.3, 0.5, 1.0] {
            assert_eq!(maximal_median(&f, &q, s).unwrap(), 7.5);
        }
    }

    #[test]
    fn rejects_bad_parameters_and_cubes() {
        let (f, q) = on_root(&[1.0, 2.0]);
        assert!(maximal_median(&f, &q, 0.0).is_err());
        assert!(maximal_median(&f, &q, 1.5).is_err());
        assert!(maximal_median(&f, &DyadicCube::new(2, vec![0]), 0.5).is_err());
        assert!(median_oscillation(&f, &q, 0.4, 0.3).is_err());
        assert!(median_oscillation(&f, &q, 0.3, 0.6).is_err());
        assert!(min_center_oscillation(&f, &q, 0.75).is_err());
    }

    #[test]
    fn median_oscillation_examples() {
        let (f, q) = on_root(&[0.0, 1.0]);
        assert_eq!(median_oscillation(&f, &q, 0.5, 0.5).unwrap(), 1.0);
        let (f, q) = on_root(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(median_oscillation(&f, &q, 0.5, 0.5).unwrap(), 1.0);
        let (f, q) = on_root(&[-2.0; 4]);
        assert_eq!(median_oscillation(&f, &q, 0.1, 0.4).unwrap(), 0.0);
    }

    #[test]
    fn min_center_examples() {
        let (f, q) = on_root(&[0.0, 1.0]);
        assert_eq!(min_center_oscillation(&f, &q, 0.5).unwrap(), (0.5, 0.5));
        let (f, q) = on_root(&[0.0, 0.0, 0.0, 10.0]);
        assert_eq!(min_center_oscillation(&f, &q, 0.25).unwrap(), (5.0, 5.0));
        assert_eq!(min_center_oscillation(&f, &q, 0.5).unwrap(), (0.0, 0.0));
        let (f, q) = on_root(&[3.0; 4]);
        assert_eq!(min_center_oscillation(&f, &q, 0.2).unwrap(), (0.0, 3.0));
    }

    #[test]
    fn leftmost_window_on_ties() {
        // m = 4, s = 1/2: k = 2, q = 3; windows [0,1,5] and [1,5,6] both have width 5
        let sorted = [0.0, 1.0, 5.0, 6.0];
        assert_eq!(min_center_oscillation_sorted(&sorted, 0.5), (2.5, 2.5));
        // m = 8, s = 1/4: k = 2, q = 7; widths 4 and 4
        let sorted = [0.0, 1.0, 1.0, 2.0, 3.0, 3.0, 4.0, 5.0];
        assert_eq!(min_center_oscillation_sorted(&sorted, 0.25), (2.0, 2.0));
    }

    #[test]
    fn sorted_and_selection_paths_agree() {
        let values = [4.0, -1.0, 2.5, 2.5, 9.0, 0.0, -3.0, 2.5];
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        for s in [0.05, 0.125, 0.3, 0.5, 0.8, 1.0] {
            assert_eq!(maximal_median_of(&values, s), maximal_median_sorted(&sorted, s));
        }
    }
}
