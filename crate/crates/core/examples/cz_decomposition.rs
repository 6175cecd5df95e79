//! Median Calderón–Zygmund cubes and the level sets of the median maximal
//! function.

use dyadic_jn::czd::{level_set, MedianPyramid};
use dyadic_jn::grid::{DyadicGrid, StepFunction};
use dyadic_jn::maximal::maximal_median;

pub fn run_example() -> dyadic_jn::Result<()> {
    let grid = DyadicGrid::unit(2, 3)?;
    let values: Vec<f64> = (0..grid.cell_count()).map(|i| ((i * 37) % 11) as f64 - 3.0).collect();
    let f = StepFunction::new(grid.clone(), values)?;
    let t = 0.25;

    let pyramid = MedianPyramid::new(&f, t)?;
    println!("root median of |f| at t = {t}: {}", pyramid.root());
    let tm = maximal_median(&f, t)?;

    for lambda in [pyramid.root(), 6.0, 7.0] {
        let cz = pyramid.decompose(lambda)?;
        let (_, measure) = level_set(&f, t, lambda)?;
        let direct = tm.measure_where(|v| v > lambda);
        println!("λ = {lambda}: {} cubes, |E_λ| = {measure} (cellwise {direct})", cz.cubes.len());
        assert_eq!(measure, direct);
        for q in cz.cubes.cubes() {
            assert!(pyramid.get(q) > lambda);
        }
    }

    match pyramid.decompose(pyramid.root() - 1.0) {
        Err(e) => println!("below the root median: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> dyadic_jn::Result<()> {
    run_example()
}
