//! The L1 bound for `(M f)^{1/p}` and the slow growth of `∫ M f` under
//! refinement for a function in L1 but not in L log L.

use dyadic_jn::verify::extremal_depth_sweep;

pub fn run_example() -> dyadic_jn::Result<()> {
    let depths: Vec<u32> = (8..=16).collect();
    let report = extremal_depth_sweep(&depths, 2.0)?;
    for (row, depth) in report.rows.iter().zip(&depths) {
        println!(
            "{}: ‖(M f)^(1/2)‖² = {:.5} <= {:.5}   ∫ M f = {:.5}",
            row.case,
            row.lhs,
            row.rhs,
            report.extras[&format!("maximal_integral_J{depth:02}")]
        );
    }
    println!("growth from J = 8 to 16: {:.4}", report.extras["growth"]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> dyadic_jn::Result<()> {
    run_example()
}
