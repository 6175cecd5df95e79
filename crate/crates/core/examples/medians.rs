//! Maximal s-medians and the two median oscillations on dyadic cubes.

use dyadic_jn::grid::{DyadicCube, DyadicGrid, StepFunction};
use dyadic_jn::median::{maximal_median, median_oscillation, min_center_oscillation};

pub fn run_example() -> dyadic_jn::Result<()> {
    let grid = DyadicGrid::unit(1, 3)?;
    let f = StepFunction::new(grid.clone(), vec![4.0, -1.0, 2.5, 2.5, 9.0, 0.0, -3.0, 2.5])?;
    let root = grid.root();

    for s in [0.125, 0.25, 0.5, 0.75, 1.0] {
        println!("m^{s}(root) = {}", maximal_median(&f, &root, s)?);
    }

    // ties need no special treatment: half of [0,1,1,0] exceeds 0 but not 1
    let indicator = StepFunction::new(DyadicGrid::unit(1, 2)?, vec![0.0, 1.0, 1.0, 0.0])?;
    let q = DyadicCube::root(1);
    assert_eq!(maximal_median(&indicator, &q, 0.5)?, 1.0);
    assert_eq!(maximal_median(&indicator, &q, 0.6)?, 0.0);

    for cube in grid.cubes_at(1) {
        let (value, center) = min_center_oscillation(&f, &cube, 0.25)?;
        let fixed = median_oscillation(&f, &cube, 0.25, 0.5)?;
        println!("cube {cube}: inf_c m^1/4_|f-c| = {value} at c = {center}; about the 1/2-median: {fixed}");
        assert!(value <= fixed && fixed <= 2.0 * value);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> dyadic_jn::Result<()> {
    run_example()
}
