//! The full verification suite over the pinned corpus.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{sample_catalog, CatalogEntry, FunctionSpec};
use crate::error::Result;
use crate::grid::StepFunction;
use crate::seminorm::{jn_seminorm, jn_seminorm_bruteforce, SeminormConfig};

use super::checks::{
    jn_constant, maximal_integral, verify_center_comparison, verify_cz, verify_equivalence,
    verify_good_lambda, verify_jn_inequality, verify_l1_bound, verify_maximal_bound,
    verify_weak_type,
};
use super::corpus::Manifest;
use super::properties::{random_instance, run_median_property_suite, sine_differentiation};
use super::report::{Row, VerificationReport};

/// Exponents at which the distribution inequality is checked.
pub const JN_EXPONENTS: [f64; 3] = [1.5, 2.0, 4.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub property_seeds: u64,
    pub dims: Vec<usize>,
    pub depths: Vec<u32>,
    pub manifest: Manifest,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self::from_manifest(Manifest::pinned())
    }
}

impl SuiteConfig {
    pub fn from_manifest(manifest: Manifest) -> Self {
        Self {
            property_seeds: manifest.property.seeds,
            dims: manifest.property.dims.clone(),
            depths: manifest.property.depths.clone(),
            manifest,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub property_seeds: u64,
    pub dims: Vec<usize>,
    pub depths: Vec<u32>,
    pub reports: Vec<VerificationReport>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn report(&self, name: &str) -> Option<&VerificationReport> {
        self.reports.iter().find(|r| r.name == name)
    }
}

type Sampled = Vec<(String, StepFunction)>;

fn over_corpus<F>(corpus: &Sampled, name: &str, parameters: &[(&str, f64)], check: F) -> Result<VerificationReport>
where
    F: Fn(&StepFunction) -> Result<VerificationReport> + Sync,
{
    let parts = corpus
        .par_iter()
        .map(|(label, f)| Ok((label.clone(), check(f)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::aggregate(name, parameters, parts))
}

/// `s` for the distribution inequality and the seminorm equivalence: the
/// largest admissible value `2^-(n+3)`.
pub fn jn_fraction(dim: usize) -> f64 {
    2f64.powi(-(dim as i32 + 3))
}

/// `(t, K, p, s)` for the good-λ check: `t = 2^-(n+1)`, `K = 2`, `p = 2`,
/// `s = t/(2K^p)`.
pub fn good_lambda_params(dim: usize) -> (f64, f64, f64, f64) {
    let t = 2f64.powi(-(dim as i32 + 1));
    (t, 2.0, 2.0, t / 8.0)
}

/// Modes compared between the recursion and exhaustive enumeration.
pub fn bruteforce_modes() -> [SeminormConfig; 3] {
    [
        SeminormConfig::avg_mean(2.0),
        SeminormConfig::med_optimal(1.5, 0.25),
        SeminormConfig::med_center(3.0, 0.25, 0.5),
    ]
}

/// Recursion versus enumeration on random one-dimensional instances; one row
/// per mode with the largest absolute difference of the optimal sums.
pub fn dp_vs_bruteforce(seeds: u64, first_seed: u64, depths: &[u32]) -> Result<VerificationReport> {
    let diffs = (0..seeds)
        .into_par_iter()
        .map(|i| {
            let depth = depths[i as usize % depths.len()];
            let (f, _) = random_instance(first_seed + i, 1, depth)?;
            bruteforce_modes()
                .iter()
                .map(|cfg| {
                    let dp = jn_seminorm(&f, cfg)?.value_pow;
                    let bf = jn_seminorm_bruteforce(&f, cfg)?.value_pow;
                    Ok(if dp.to_bits() == bf.to_bits() { 0.0 } else { (dp - bf).abs().max(f64::MIN_POSITIVE) })
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = VerificationReport::new("dp-vs-bruteforce", &[("seeds", seeds as f64)]);
    for (k, cfg) in bruteforce_modes().iter().enumerate() {
        let worst = diffs.iter().map(|d| d[k]).fold(0.0, f64::max);
        report.push(Row::new(cfg.mode.name(), &[("p", cfg.p)], worst, 0.0));
    }
    report.corpus = vec![format!("random seeds {first_seed}..{}, n = 1, depths {depths:?}", first_seed + seeds)];
    Ok(report.finish())
}

/// The l1 bound for `jn-extremal` at each depth, with `∫ M^d f` per depth in
/// the extras, its growth from the first to the last depth, and whether it
/// increases monotonically. Growth is reported, not asserted.
pub fn extremal_depth_sweep(depths: &[u32], p: f64) -> Result<VerificationReport> {
    let spec = FunctionSpec::new(CatalogEntry::JnExtremal);
    let parts = depths
        .par_iter()
        .map(|&depth| {
            let f = sample_catalog(&spec, &spec.grid(1, depth)?)?;
            Ok((depth, verify_l1_bound(&f, p)?, maximal_integral(&f)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = VerificationReport::new("l1-bound-depth-sweep", &[("p", p)]);
    let mut integrals = Vec::new();
    for (depth, part, integral) in parts {
        let mut row = part.rows[0].clone();
        row.case = format!("J={depth}");
        report.push(row);
        report.extra(&format!("maximal_integral_J{depth:02}"), integral);
        report.theoretical_constant = part.theoretical_constant;
        integrals.push(integral);
    }
    if let (Some(first), Some(last)) = (integrals.first(), integrals.last()) {
        report.extra("growth", last / first);
    }
    let monotone = integrals.windows(2).all(|w| w[1] > w[0]);
    report.extra("monotone", if monotone { 1.0 } else { 0.0 });
    report.corpus = vec![spec.label()];
    Ok(report.finish())
}

/// The constants used by the seminorm comparisons and the maximal bound
/// equal the distribution constant, for each exponent.
pub fn constants_chain(f: &StepFunction) -> Result<VerificationReport> {
    let s = jn_fraction(f.grid().dim());
    let mut report = VerificationReport::new("constants-chain", &[]);
    for p in JN_EXPONENTS {
        let reference = verify_jn_inequality(f, p, s, 0.5, None)?.theoretical_constant.unwrap_or(f64::NAN);
        for (case, used) in [
            ("equivalence", verify_equivalence(f, p, s)?.parameters["c"]),
            ("maximal-bound", verify_maximal_bound(f, p)?.parameters["c"]),
            ("closed-form", jn_constant(p)),
        ] {
            let diff = if used.to_bits() == reference.to_bits() { 0.0 } else { f64::INFINITY };
            report.push(Row::new(case, &[("p", p)], diff, 0.0));
        }
    }
    Ok(report.finish())
}

/// Runs every check. Reports come out in a fixed order and each check merges
/// its per-function results in corpus order, so the output does not depend on
/// scheduling.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let manifest = &cfg.manifest;
    let corpus: Sampled = manifest
        .corpus()
        .par_iter()
        .map(|c| Ok((c.label(), c.sample()?)))
        .collect::<Result<Vec<_>>>()?;

    let mut reports = vec![
        run_median_property_suite(cfg.property_seeds, &cfg.dims, &cfg.depths)?,
        sine_differentiation(manifest.differentiation_depth)?,
        dp_vs_bruteforce(manifest.bruteforce.seeds, manifest.bruteforce.first_seed, &manifest.bruteforce.depths)?,
        over_corpus(&corpus, "cz", &[("t", 0.5)], |f| verify_cz(f, 0.5, None))?,
        over_corpus(&corpus, "weak-type", &[], |f| verify_weak_type(f, None))?,
    ];
    for p in JN_EXPONENTS {
        reports.push(over_corpus(&corpus, "jn-inequality", &[("p", p), ("r", 0.5)], |f| {
            verify_jn_inequality(f, p, jn_fraction(f.grid().dim()), 0.5, None)
        })?);
    }
    reports.push(over_corpus(&corpus, "good-lambda", &[("p", 2.0), ("K", 2.0)], |f| {
        let (t, k, p, s) = good_lambda_params(f.grid().dim());
        verify_good_lambda(f, p, t, k, s, None)
    })?);
    reports.push(over_corpus(&corpus, "equivalence", &[("p", 2.0)], |f| {
        verify_equivalence(f, 2.0, jn_fraction(f.grid().dim()))
    })?);
    reports.push(over_corpus(&corpus, "center-comparison", &[("p", 2.0), ("s", 0.25), ("t", 0.5)], |f| {
        verify_center_comparison(f, 2.0, 0.25, 0.5)
    })?);
    reports.push(over_corpus(&corpus, "maximal-bound", &[("p", 2.0)], |f| verify_maximal_bound(f, 2.0))?);
    reports.push(over_corpus(&corpus, "l1-bound", &[("p", 2.0)], |f| verify_l1_bound(f, 2.0))?);
    reports.push(extremal_depth_sweep(&manifest.extremal_depths, 2.0)?);
    if let Some((_, f)) = corpus.first() {
        reports.push(constants_chain(f)?);
    }

    let pass = reports.iter().all(|r| r.pass);
    Ok(SuiteReport {
        property_seeds: cfg.property_seeds,
        dims: cfg.dims.clone(),
        depths: cfg.depths.clone(),
        reports,
        pass,
    })
}
