//! Level-by-level views of the dyadic tree.
//!
//! Cells are permuted into Morton (bit-interleaved) order so that every
//! dyadic cube of level `j` is a contiguous block of `2^{(J-j) n}` cells and
//! its children are the `2^n` consecutive blocks of level `j + 1`. Row-major
//! order remains the public storage order; this permutation is internal.

use crate::grid::{DyadicCube, DyadicGrid, StepFunction};

/// Morton code of a cube index at the given level.
pub(crate) fn interleave(index: &[usize], level: u32) -> usize {
    let mut code = 0usize;
    for bit in (0..level).rev() {
        for &k in index {
            code = (code << 1) | ((k >> bit) & 1);
        }
    }
    code
}

pub(crate) fn deinterleave(code: usize, level: u32, dim: usize) -> Vec<usize> {
    let mut index = vec![0usize; dim];
    let mut shift = level as usize * dim;
    for bit in (0..level).rev() {
        for k in index.iter_mut() {
            shift -= 1;
            *k |= ((code >> shift) & 1) << bit;
        }
    }
    index
}

pub(crate) struct Layout {
    dim: usize,
    depth: u32,
    /// Morton position -> row-major cell.
    order: Vec<usize>,
}

impl Layout {
    pub(crate) fn new(grid: &DyadicGrid) -> Self {
        let mut order = vec![0usize; grid.cell_count()];
        for cell in 0..grid.cell_count() {
            let multi = grid.cell_multi_index(cell);
            order[interleave(&multi, grid.depth())] = cell;
        }
        Self { dim: grid.dim(), depth: grid.depth(), order }
    }

    pub(crate) fn block_len(&self, level: u32) -> usize {
        1 << ((self.depth - level) as usize * self.dim)
    }

    pub(crate) fn gather(&self, values: &[f64]) -> Vec<f64> {
        self.order.iter().map(|&cell| values[cell]).collect()
    }

    pub(crate) fn scatter(&self, morton: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; morton.len()];
        for (pos, &cell) in self.order.iter().enumerate() {
            out[cell] = morton[pos];
        }
        out
    }

    /// Calls `visit(level, buf)` for `level = J, J-1, .., 0`, where `buf` holds
    /// the function's values in Morton order with every level-`level` block
    /// sorted ascending.
    ///
    /// Each level is obtained from the previous one by a stable sort of every
    /// block; a block is the concatenation of `2^n` already sorted runs, which
    /// the run-detecting merge sort handles in `O(m n)`.
    pub(crate) fn for_each_level_sorted(
        &self,
        f: &StepFunction,
        mut visit: impl FnMut(u32, &[f64]),
    ) {
        let mut buf = self.gather(f.values());
        visit(self.depth, &buf);
        for level in (0..self.depth).rev() {
            let m = self.block_len(level);
            for block in buf.chunks_mut(m) {
                block.sort_by(f64::total_cmp);
            }
            visit(level, &buf);
        }
    }

    /// Builds a table with one entry per cube from the sorted blocks of each level.
    pub(crate) fn table_from_sorted<T>(
        &self,
        f: &StepFunction,
        mut per_block: impl FnMut(u32, &[f64]) -> T,
    ) -> CubeTable<T> {
        let mut levels: Vec<Vec<T>> = (0..=self.depth).map(|_| Vec::new()).collect();
        self.for_each_level_sorted(f, |level, buf| {
            let m = self.block_len(level);
            levels[level as usize] = buf.chunks(m).map(|b| per_block(level, b)).collect();
        });
        CubeTable { dim: self.dim, depth: self.depth, levels }
    }
}

/// One value per dyadic cube of a grid, stored level by level in Morton order.
#[derive(Debug, Clone)]
pub struct CubeTable<T> {
    dim: usize,
    depth: u32,
    levels: Vec<Vec<T>>,
}

impl<T> CubeTable<T> {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn get(&self, cube: &DyadicCube) -> &T {
        &self.levels[cube.level as usize][interleave(&cube.index, cube.level)]
    }

    pub(crate) fn map_in_place(&mut self, op: impl Fn(T) -> T)
    where
        T: Copy,
    {
        for v in self.levels.iter_mut().flatten() {
            *v = op(*v);
        }
    }

    pub(crate) fn level(&self, level: u32) -> &[T] {
        &self.levels[level as usize]
    }

    pub(crate) fn cube_at(&self, level: u32, block: usize) -> DyadicCube {
        DyadicCube::new(level, deinterleave(block, level, self.dim))
    }

    pub(crate) fn children_range(&self, block: usize) -> std::ops::Range<usize> {
        let fan = 1usize << self.dim;
        block * fan..(block + 1) * fan
    }

    /// Top-down sweep: every cell receives the maximum of the entries of all
    /// cubes containing it. Output is row-major.
    pub(crate) fn ancestor_max(&self, layout: &Layout) -> Vec<f64>
    where
        T: Copy + Into<f64>,
    {
        let mut running: Vec<f64> = vec![self.levels[0][0].into()];
        for level in 1..=self.depth {
            let fan = 1usize << self.dim;
            running = self.levels[level as usize]
                .iter()
                .enumerate()
                .map(|(block, &v)| running[block / fan].max(v.into()))
                .collect();
        }
        layout.scatter(&running)
    }
}
