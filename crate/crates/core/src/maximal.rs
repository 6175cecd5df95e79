//! Dyadic maximal operators on step functions.
//!
//! Both operators take a supremum over the dyadic cubes containing a point.
//! Cubes finer than the grid carry the value of their finest cell, so levels
//! `0..=J` suffice. Each cube is evaluated once from the level-sorted Morton
//! blocks (see [`crate::tree`]): averages from block sums, medians by direct
//! indexing into the sorted block. A top-down sweep then carries the running
//! maximum from each cube to its children, for `O(cells × J)` total work.

use crate::error::Result;
use crate::grid::StepFunction;
use crate::czd::MedianPyramid;
use crate::tree::Layout;

/// `M^d f(x) = sup_{Q ∋ x} avg_Q |f|`.
pub fn maximal_avg(f: &StepFunction) -> StepFunction {
    let layout = Layout::new(f.grid());
    let table = layout.table_from_sorted(&f.abs(), |_, block| {
        block.iter().sum::<f64>() / block.len() as f64
    });
    let values = table.ancestor_max(&layout);
    StepFunction::new(f.grid().clone(), values).expect("averages of finite values are finite")
}

/// `M^{d,t} f(x) = sup_{Q ∋ x} m^t_{|f|}(Q)`.
pub fn maximal_median(f: &StepFunction, t: f64) -> Result<StepFunction> {
    let pyramid = MedianPyramid::new(f, t)?;
    StepFunction::new(f.grid().clone(), pyramid.ancestor_max())
}
