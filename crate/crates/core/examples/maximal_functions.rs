//! Dyadic maximal functions of average and median type, and the weak
//! type (1,1) estimate.

use dyadic_jn::catalog::{sample_catalog, CatalogEntry, FunctionSpec};
use dyadic_jn::grid::{DyadicGrid, StepFunction};
use dyadic_jn::maximal::{maximal_avg, maximal_median};
use dyadic_jn::verify::verify_weak_type;

pub fn run_example() -> dyadic_jn::Result<()> {
    let f = StepFunction::new(DyadicGrid::unit(1, 2)?, vec![0.0, 0.0, 0.0, 4.0])?;
    println!("M f        = {:?}", maximal_avg(&f).values());
    println!("M^(1/2) f  = {:?}", maximal_median(&f, 0.5)?.values());

    let spec = FunctionSpec::new(CatalogEntry::LogReciprocal);
    let g = sample_catalog(&spec, &spec.grid(1, 10)?)?;
    let report = verify_weak_type(&g, None)?;
    println!(
        "log(1/x) at J = 10: sup λ|{{M f > λ}}| / ‖f‖_1 = {:.6} over {} rows, pass = {}",
        report.empirical_constant.unwrap_or(0.0),
        report.rows.len(),
        report.pass
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> dyadic_jn::Result<()> {
    run_example()
}
