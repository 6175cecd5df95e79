//! Median Calderón–Zygmund stopping time.
//!
//! The cubes selected at level `λ` are the maximal dyadic cubes with
//! `m^t_{|f|}(Q) > λ`. They are found by descending from the root and
//! stopping at the first cube that exceeds `λ` along each branch. The union
//! of the selected cubes is exactly `{M^{d,t} f > λ}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{DyadicCube, DyadicGrid, StepFunction};
use crate::median::median_table;
use crate::tree::{CubeTable, Layout};

/// A list of dyadic cubes, kept in canonical (level, index) order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CubeCollection(Vec<DyadicCube>);

impl CubeCollection {
    pub fn new(mut cubes: Vec<DyadicCube>) -> Self {
        cubes.sort();
        cubes.dedup();
        Self(cubes)
    }

    pub fn cubes(&self) -> &[DyadicCube] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// No cube is an ancestor of another.
    pub fn is_antichain(&self) -> bool {
        let members: std::collections::BTreeSet<&DyadicCube> = self.0.iter().collect();
        self.0.iter().all(|cube| {
            let mut up = cube.parent();
            while let Some(p) = up {
                if members.contains(&p) {
                    return false;
                }
                up = p.parent();
            }
            true
        })
    }

    /// Row-major mask of the finest cells covered by the collection.
    pub fn cell_mask(&self, grid: &DyadicGrid) -> Vec<bool> {
        let mut mask = vec![false; grid.cell_count()];
        for cube in &self.0 {
            for cell in grid.cube_cells(cube) {
                mask[cell] = true;
            }
        }
        mask
    }

    /// Measure of the union, as covered cell count × cell measure.
    pub fn union_measure(&self, grid: &DyadicGrid) -> f64 {
        let count = self.cell_mask(grid).into_iter().filter(|&b| b).count();
        count as f64 * grid.cell_measure()
    }
}

impl From<Vec<DyadicCube>> for CubeCollection {
    fn from(cubes: Vec<DyadicCube>) -> Self {
        Self::new(cubes)
    }
}

/// `m^t_{|f|}(Q)` for every dyadic cube of the grid.
pub struct MedianPyramid {
    t: f64,
    table: CubeTable<f64>,
    layout: Layout,
}

impl MedianPyramid {
    pub fn new(f: &StepFunction, t: f64) -> Result<Self> {
        let table = median_table(&f.abs(), t)?;
        Ok(Self { t, table, layout: Layout::new(f.grid()) })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn root(&self) -> f64 {
        self.table.level(0)[0]
    }

    pub fn get(&self, cube: &DyadicCube) -> f64 {
        *self.table.get(cube)
    }

    /// Cellwise `sup_{Q ∋ x} m^t_{|f|}(Q)`, row-major.
    pub(crate) fn ancestor_max(&self) -> Vec<f64> {
        self.table.ancestor_max(&self.layout)
    }

    /// Stopping-time selection at level `lambda`.
    pub fn decompose(&self, lambda: f64) -> Result<CZResult> {
        let root = self.root();
        if lambda.is_nan() || lambda < root {
            return Err(Error::BelowRootMedian { lambda, root_median: root });
        }
        let depth = self.table.depth();
        let mut selected = Vec::new();
        // blocks still undecided, all with median <= lambda
        let mut open = vec![0usize];
        for level in 1..=depth {
            let medians = self.table.level(level);
            let mut next = Vec::new();
            for block in open {
                for child in self.table.children_range(block) {
                    if medians[child] > lambda {
                        selected.push(self.table.cube_at(level, child));
                    } else {
                        next.push(child);
                    }
                }
            }
            open = next;
        }
        Ok(CZResult { lambda, t: self.t, cubes: CubeCollection::new(selected) })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CZResult {
    pub lambda: f64,
    pub t: f64,
    pub cubes: CubeCollection,
}

/// Calderón–Zygmund cubes of `f` at level `lambda` for `m^t_{|f|}`.
///
/// Requires `lambda >= m^t_{|f|}(Q0)`.
pub fn cz_decompose(f: &StepFunction, t: f64, lambda: f64) -> Result<CZResult> {
    MedianPyramid::new(f, t)?.decompose(lambda)
}

/// The cubes of [`cz_decompose`] together with the measure of their union,
/// which is `|{M^{d,t} f > lambda}|`.
pub fn level_set(f: &StepFunction, t: f64, lambda: f64) -> Result<(CubeCollection, f64)> {
    let cz = cz_decompose(f, t, lambda)?;
    let measure = cz.cubes.union_measure(f.grid());
    Ok((cz.cubes, measure))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(values: &[f64]) -> StepFunction {
        let grid = DyadicGrid::unit(1, values.len().trailing_zeros()).unwrap();
        StepFunction::new(grid, values.to_vec()).unwrap()
    }

    #[test]
    fn decomposition_examples() {
        let f = line(&[0.0, 0.0, 0.0, 8.0]);
        let cz = cz_decompose(&f, 0.5, 1.0).unwrap();
        assert_eq!(cz.cubes.cubes(), &[DyadicCube::new(1, vec![1])]);
        assert!(cz_decompose(&f, 0.5, 8.0).unwrap().cubes.is_empty());

        let f = line(&[5.0, 5.0]);
        assert!(cz_decompose(&f, 0.5, 5.0).unwrap().cubes.is_empty());
    }

    #[test]
    fn below_root_median_is_an_error() {
        let f = line(&[5.0, 5.0]);
        match cz_decompose(&f, 0.5, 4.0) {
            Err(Error::BelowRootMedian { root_median, .. }) => assert_eq!(root_median, 5.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn level_set_examples() {
        let f = line(&[0.0, 0.0, 0.0, 8.0]);
        assert_eq!(level_set(&f, 0.5, 1.0).unwrap().1, 0.5);
        assert_eq!(level_set(&f, 0.5, 9.0).unwrap().1, 0.0);
        let f = line(&[2.0; 8]);
        assert_eq!(level_set(&f, 0.3, 2.0).unwrap().1, 0.0);
    }

    #[test]
    fn pyramid_matches_direct_medians() {
        let grid = DyadicGrid::unit(2, 2).unwrap();
        let values: Vec<f64> = (0..16).map(|i| ((i * 7) % 5) as f64 - 2.0).collect();
        let f = StepFunction::new(grid.clone(), values).unwrap();
        let pyr = MedianPyramid::new(&f, 0.25).unwrap();
        for cube in grid.all_cubes() {
            let direct = crate::median::maximal_median(&f.abs(), &cube, 0.25).unwrap();
            assert_eq!(pyr.get(&cube), direct);
        }
    }

    #[test]
    fn antichain_check() {
        let a = CubeCollection::new(vec![DyadicCube::new(1, vec![0]), DyadicCube::new(1, vec![1])]);
        assert!(a.is_antichain());
        let b = CubeCollection::new(vec![DyadicCube::new(1, vec![0]), DyadicCube::new(2, vec![1])]);
        assert!(!b.is_antichain());
    }
}
