//! Sampling catalog functions onto dyadic grids and round-tripping them
//! through the JSON and CSV file formats.

use dyadic_jn::catalog::{sample_catalog, CatalogEntry, FunctionSpec, SamplingRule};
use dyadic_jn::io;

pub fn run_example() -> dyadic_jn::Result<()> {
    let specs = [
        FunctionSpec::new(CatalogEntry::LogReciprocal),
        FunctionSpec::new(CatalogEntry::Power { exponent: -0.5 }).with_rule(SamplingRule::ExactCellAverage),
        FunctionSpec::new(CatalogEntry::JnExtremal),
        FunctionSpec::new(CatalogEntry::RandomUniform { lo: -1.0, hi: 1.0, seed: 7 }),
    ];
    let dir = std::env::temp_dir().join(format!("jn-sampling-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    for spec in &specs {
        let grid = spec.grid(1, 4)?;
        let f = sample_catalog(spec, &grid)?;
        println!("{:<36} root side {:<6} first cells {:?}", spec.label(), grid.side(), &f.values()[..3]);

        for name in ["f.json", "f.csv"] {
            let path = dir.join(name);
            io::store(&f, &path)?;
            assert_eq!(io::load(&path)?, f, "{name} round trip");
        }
    }

    // two-dimensional analytic entries vary along the first axis only
    let spec = FunctionSpec::new(CatalogEntry::SmoothLipschitz { amplitude: 1.0, frequency: 1.0 });
    let f = sample_catalog(&spec, &spec.grid(2, 2)?)?;
    println!("sin(2πx) on a 4x4 grid, row-major: {:?}", f.values());
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> dyadic_jn::Result<()> {
    run_example()
}
