//! Exact dyadic John–Nirenberg seminorms in all three oscillation modes,
//! checked against exhaustive antichain enumeration.

use dyadic_jn::grid::{DyadicGrid, StepFunction};
use dyadic_jn::seminorm::{companion_norms, jn_seminorm, jn_seminorm_bruteforce, SeminormConfig};

pub fn run_example() -> dyadic_jn::Result<()> {
    let f = StepFunction::new(DyadicGrid::unit(1, 4)?, vec![
        0.0, 1.0, 0.0, 1.0, 3.0, 3.0, 3.0, -2.0, 0.5, 0.5, 0.5, 0.5, 7.0, 0.0, 0.0, 0.0,
    ])?;
    for cfg in [
        SeminormConfig::avg_mean(2.0),
        SeminormConfig::med_optimal(2.0, 0.25),
        SeminormConfig::med_center(2.0, 0.25, 0.5),
    ] {
        let report = jn_seminorm(&f, &cfg)?;
        let exhaustive = jn_seminorm_bruteforce(&f, &cfg)?;
        assert_eq!(report.value_pow, exhaustive.value_pow);
        let cubes: Vec<String> = report.optimum.cubes().iter().map(|c| c.to_string()).collect();
        println!("{:<12} ‖f‖ = {:.6}  optimal cubes {:?}", cfg.mode.name(), report.value, cubes);
    }
    let norms = companion_norms(&f, 2.0)?;
    println!("companion norms: {norms:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> dyadic_jn::Result<()> {
    run_example()
}
