//! The John–Nirenberg distribution inequality and its good-λ step on
//! functions with logarithmic singularities.

use dyadic_jn::catalog::{sample_catalog, CatalogEntry, FunctionSpec};
use dyadic_jn::verify::{verify_good_lambda, verify_jn_inequality};

pub fn run_example() -> dyadic_jn::Result<()> {
    for spec in [FunctionSpec::new(CatalogEntry::LogReciprocal), FunctionSpec::new(CatalogEntry::JnExtremal)] {
        let f = sample_catalog(&spec, &spec.grid(1, 12)?)?;
        for p in [1.5, 2.0, 4.0] {
            let r = verify_jn_inequality(&f, p, 1.0 / 16.0, 0.5, None)?;
            println!(
                "{:<24} p = {p}: empirical {:.4} <= theoretical {:.2}  pass = {}",
                spec.label(),
                r.empirical_constant.unwrap_or(0.0),
                r.theoretical_constant.unwrap_or(0.0),
                r.pass
            );
        }
        let r = verify_good_lambda(&f, 2.0, 0.25, 2.0, 1.0 / 32.0, None)?;
        println!("{:<24} good-λ worst lhs/rhs {:.4}  pass = {}", "", r.empirical_constant.unwrap_or(0.0), r.pass);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> dyadic_jn::Result<()> {
    run_example()
}
