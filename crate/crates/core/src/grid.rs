//! Dyadic grids, dyadic cubes and step functions.
//!
//! A [`DyadicGrid`] is a root cube `Q0 = origin + [0, side]^n` together with a
//! finest level `J`. Its `2^{J n}` finest cells are addressed by a multi-index
//! `k ∈ [0, 2^J)^n` and stored row-major: the last coordinate varies fastest.
//! A [`DyadicCube`] at level `j` covers the cells whose multi-index, shifted
//! right by `J - j` bits, equals its own index.

use serde::{Deserialize, Serialize};

use crate::error::{validation, Error, Result};

/// Default upper bound on `2^{J n}`.
pub const DEFAULT_CELL_BUDGET: u64 = 1 << 24;

/// Environment variable overriding [`DEFAULT_CELL_BUDGET`].
pub const CELL_BUDGET_ENV: &str = "JN_CELL_BUDGET";

/// The cell budget in effect: `JN_CELL_BUDGET` if set and parseable, else the default.
pub fn cell_budget() -> u64 {
    std::env::var(CELL_BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CELL_BUDGET)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DyadicGrid {
    dim: usize,
    depth: u32,
    origin: Vec<f64>,
    side: f64,
}

impl DyadicGrid {
    pub fn new(dim: usize, depth: u32, origin: Vec<f64>, side: f64) -> Result<Self> {
        Self::with_budget(dim, depth, origin, side, cell_budget())
    }

    pub fn with_budget(
        dim: usize,
        depth: u32,
        origin: Vec<f64>,
        side: f64,
        budget: u64,
    ) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(validation(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        if origin.len() != dim {
            return Err(validation(format!(
                "origin has {} coordinates, dimension is {dim}",
                origin.len()
            )));
        }
        if origin.iter().any(|x| !x.is_finite()) {
            return Err(validation("origin coordinates must be finite"));
        }
        if !(side.is_finite() && side > 0.0) {
            return Err(validation(format!("root side must be positive, got {side}")));
        }
        let bits = depth as u64 * dim as u64;
        if bits >= 63 || (1u64 << bits) > budget {
            return Err(Error::Resource(format!(
                "grid with dim {dim} and depth {depth} has 2^{bits} cells, budget is {budget}"
            )));
        }
        Ok(Self { dim, depth, origin, side })
    }

    /// Unit cube `[0, 1]^dim`.
    pub fn unit(dim: usize, depth: u32) -> Result<Self> {
        Self::new(dim, depth, vec![0.0; dim], 1.0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    /// Number of cells along each axis, `2^J`.
    pub fn cells_per_axis(&self) -> usize {
        1 << self.depth
    }

    pub fn cell_count(&self) -> usize {
        1 << (self.depth as usize * self.dim)
    }

    /// Number of finest cells in a cube of the given level.
    pub fn cells_in_level(&self, level: u32) -> usize {
        1 << ((self.depth - level) as usize * self.dim)
    }

    pub fn root_measure(&self) -> f64 {
        self.side.powi(self.dim as i32)
    }

    /// `|Q| = side^n 2^{-j n}` for a cube of level `j`.
    pub fn cube_measure(&self, level: u32) -> f64 {
        self.root_measure() * 2f64.powi(-((level as usize * self.dim) as i32))
    }

    pub fn cell_measure(&self) -> f64 {
        self.cube_measure(self.depth)
    }

    pub fn cube_side(&self, level: u32) -> f64 {
        self.side * 2f64.powi(-(level as i32))
    }

    /// Euclidean diameter of a level-`j` cube.
    pub fn cube_diameter(&self, level: u32) -> f64 {
        self.cube_side(level) * (self.dim as f64).sqrt()
    }

    pub fn root(&self) -> DyadicCube {
        DyadicCube::root(self.dim)
    }

    pub fn contains(&self, cube: &DyadicCube) -> bool {
        cube.level <= self.depth
            && cube.index.len() == self.dim
            && cube.index.iter().all(|&k| k < (1usize << cube.level))
    }

    pub(crate) fn check_cube(&self, cube: &DyadicCube) -> Result<()> {
        if self.contains(cube) {
            Ok(())
        } else {
            Err(validation(format!(
                "cube {cube} is not a cube of a dim-{} depth-{} grid",
                self.dim, self.depth
            )))
        }
    }

    pub fn cell_multi_index(&self, cell: usize) -> Vec<usize> {
        let mask = self.cells_per_axis() - 1;
        let mut index = vec![0; self.dim];
        let mut rest = cell;
        for d in (0..self.dim).rev() {
            index[d] = rest & mask;
            rest >>= self.depth;
        }
        index
    }

    pub fn cell_index(&self, multi: &[usize]) -> usize {
        multi.iter().fold(0, |acc, &k| (acc << self.depth) | k)
    }

    /// Lower and upper corner of a finest cell.
    pub fn cell_bounds(&self, cell: usize) -> (Vec<f64>, Vec<f64>) {
        let h = self.cube_side(self.depth);
        let multi = self.cell_multi_index(cell);
        let lo: Vec<f64> = multi
            .iter()
            .zip(&self.origin)
            .map(|(&k, &o)| o + k as f64 * h)
            .collect();
        let hi = multi
            .iter()
            .zip(&self.origin)
            .map(|(&k, &o)| o + (k + 1) as f64 * h)
            .collect();
        (lo, hi)
    }

    pub fn cell_midpoint(&self, cell: usize) -> Vec<f64> {
        let h = self.cube_side(self.depth);
        self.cell_multi_index(cell)
            .iter()
            .zip(&self.origin)
            .map(|(&k, &o)| o + (k as f64 + 0.5) * h)
            .collect()
    }

    /// All cubes of one level in canonical (index-lexicographic) order.
    pub fn cubes_at(&self, level: u32) -> impl Iterator<Item = DyadicCube> + '_ {
        let per_axis = 1usize << level;
        let total = 1usize << (level as usize * self.dim);
        (0..total).map(move |flat| {
            let mut index = vec![0; self.dim];
            let mut rest = flat;
            for d in (0..self.dim).rev() {
                index[d] = rest % per_axis;
                rest /= per_axis;
            }
            DyadicCube { level, index }
        })
    }

    /// Every cube of the grid, ordered by (level, index).
    pub fn all_cubes(&self) -> impl Iterator<Item = DyadicCube> + '_ {
        (0..=self.depth).flat_map(move |j| self.cubes_at(j))
    }

    /// The level-`level` cube containing a finest cell.
    pub fn ancestor_of_cell(&self, cell: usize, level: u32) -> DyadicCube {
        let shift = self.depth - level;
        DyadicCube {
            level,
            index: self.cell_multi_index(cell).into_iter().map(|k| k >> shift).collect(),
        }
    }

    /// Row-major indices of the finest cells inside `cube`, in row-major order.
    pub fn cube_cells(&self, cube: &DyadicCube) -> Vec<usize> {
        let span = 1usize << (self.depth - cube.level);
        let start: Vec<usize> = cube.index.iter().map(|&k| k * span).collect();
        let mut out = Vec::with_capacity(span.pow(self.dim as u32));
        let mut offset = vec![0usize; self.dim];
        loop {
            let multi: Vec<usize> = start.iter().zip(&offset).map(|(s, o)| s + o).collect();
            out.push(self.cell_index(&multi));
            // odometer, last coordinate fastest
            let mut d = self.dim;
            loop {
                if d == 0 {
                    return out;
                }
                d -= 1;
                offset[d] += 1;
                if offset[d] < span {
                    break;
                }
                offset[d] = 0;
            }
        }
    }
}

/// A node `(level, index)` of the dyadic tree of a root cube.
///
/// Ordering is by level first, then lexicographically by index; this is the
/// canonical order used for every serialized collection of cubes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicCube {
    pub level: u32,
    pub index: Vec<usize>,
}

impl DyadicCube {
    pub fn new(level: u32, index: Vec<usize>) -> Self {
        Self { level, index }
    }

    pub fn root(dim: usize) -> Self {
        Self { level: 0, index: vec![0; dim] }
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn parent(&self) -> Option<DyadicCube> {
        (self.level > 0).then(|| DyadicCube {
            level: self.level - 1,
            index: self.index.iter().map(|k| k >> 1).collect(),
        })
    }

    /// The `2^n` children. Child `c` takes bit `n - 1 - d` of `c` as the low
    /// bit of coordinate `d`.
    pub fn children(&self) -> impl Iterator<Item = DyadicCube> + '_ {
        let n = self.dim();
        (0..1usize << n).map(move |c| DyadicCube {
            level: self.level + 1,
            index: self
                .index
                .iter()
                .enumerate()
                .map(|(d, &k)| 2 * k + ((c >> (n - 1 - d)) & 1))
                .collect(),
        })
    }

    /// True if `self` contains `other` (a cube contains itself).
    pub fn contains(&self, other: &DyadicCube) -> bool {
        other.level >= self.level
            && other.dim() == self.dim()
            && other
                .index
                .iter()
                .zip(&self.index)
                .all(|(&k, &own)| k >> (other.level - self.level) == own)
    }

    pub fn is_strict_ancestor_of(&self, other: &DyadicCube) -> bool {
        other.level > self.level && self.contains(other)
    }

    /// Dyadic cubes are either nested or have disjoint interiors.
    pub fn interiors_disjoint(&self, other: &DyadicCube) -> bool {
        !self.contains(other) && !other.contains(self)
    }
}

impl std::fmt::Display for DyadicCube {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.level)?;
        for k in &self.index {
            write!(f, ",{k}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for DyadicCube {
    type Err = Error;

    /// Parses `level,k1[,k2...]`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(',').map(|p| p.trim().parse::<usize>());
        let level = parts
            .next()
            .and_then(|r| r.ok())
            .ok_or_else(|| validation(format!("bad cube '{s}', expected level,k1[,k2..]")))?;
        let index = parts
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| validation(format!("bad cube index in '{s}'")))?;
        if index.is_empty() {
            return Err(validation(format!("cube '{s}' has no index")));
        }
        Ok(DyadicCube { level: level as u32, index })
    }
}

/// Real values on the finest cells of a grid, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    grid: DyadicGrid,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(grid: DyadicGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.cell_count() {
            return Err(Error::LengthMismatch { expected: grid.cell_count(), found: values.len() });
        }
        if let Some((index, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value: v.to_string() });
        }
        Ok(Self { grid, values })
    }

    pub fn constant(grid: DyadicGrid, c: f64) -> Result<Self> {
        let n = grid.cell_count();
        Self::new(grid, vec![c; n])
    }

    pub fn grid(&self) -> &DyadicGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Applies `op` cellwise; fails if a result is not finite.
    pub fn map(&self, op: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid.clone(), self.values.iter().map(|&v| op(v)).collect())
    }

    pub fn abs(&self) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|v| v.abs()).collect() }
    }

    /// Cellwise combination of two functions on the same grid.
    pub fn zip_with(&self, other: &StepFunction, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(validation("step functions live on different grids"));
        }
        Self::new(
            self.grid.clone(),
            self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect(),
        )
    }

    /// Values of the cells inside `cube`, in row-major order.
    pub fn cube_values(&self, cube: &DyadicCube) -> Result<Vec<f64>> {
        self.grid.check_cube(cube)?;
        Ok(self.grid.cube_cells(cube).into_iter().map(|i| self.values[i]).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Measure of the cells satisfying `pred`, computed as count × cell measure.
    pub fn measure_where(&self, pred: impl Fn(f64) -> bool) -> f64 {
        let count = self.values.iter().filter(|&&v| pred(v)).count();
        count as f64 * self.grid.cell_measure()
    }
}
