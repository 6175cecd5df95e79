//! Runs the full verification suite on the pinned corpus and prints one line
//! per check.

use dyadic_jn::verify::{run_suite, SuiteConfig};

pub fn run_example() -> dyadic_jn::Result<()> {
    let suite = run_suite(&SuiteConfig::default())?;
    for r in &suite.reports {
        let worst = r.worst_row().map_or(0.0, |row| row.ratio());
        let p = r.parameters.get("p").map_or(String::new(), |p| format!(" p={p}"));
        println!(
            "{:<22}{:<8} {} rows={:<5} worst lhs/rhs={:.4e} empirical={:?} theoretical={:?}",
            r.name,
            p,
            if r.pass { "PASS" } else { "FAIL" },
            r.rows.len(),
            worst,
            r.empirical_constant,
            r.theoretical_constant
        );
    }
    if let Some(sweep) = suite.report("l1-bound-depth-sweep") {
        println!("jn-extremal: ∫M f growth J=8→16 = {:.4}", sweep.extras["growth"]);
    }
    println!("suite {}", if suite.pass { "PASS" } else { "FAIL" });
    Ok(())
}

#[allow(dead_code)]
fn main() -> dyadic_jn::Result<()> {
    run_example()
}
