//! Acceptance criteria. Each test prints one `criterion N PASS|FAIL` line to
//! the real stdout (not the captured test output) and then asserts.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use dyadic_jn::catalog::{sample_catalog, CatalogEntry, FunctionSpec, SamplingRule};
use dyadic_jn::czd::{level_set, MedianPyramid};
use dyadic_jn::grid::{DyadicCube, DyadicGrid, StepFunction};
use dyadic_jn::maximal::{maximal_avg, maximal_median as median_maximal_function};
use dyadic_jn::median::maximal_median;
use dyadic_jn::seminorm::{jn_seminorm, jn_seminorm_bruteforce, SeminormConfig};
use dyadic_jn::verify::{
    extremal_depth_sweep, jn_constant, maximal_integral, run_median_property_suite,
    sine_differentiation, verify_center_comparison, verify_equivalence, verify_good_lambda,
    verify_jn_inequality, verify_l1_bound, verify_maximal_bound, LambdaGrid, Manifest,
    VerificationReport, RELATIVE_SLACK,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report_line(number: u32, title: &str, pass: bool, detail: &str, elapsed: Duration, limit_secs: f64) {
    let in_time = elapsed.as_secs_f64() < limit_secs;
    let status = if pass && in_time { "PASS" } else { "FAIL" };
    let line = format!(
        "criterion {number:>2} {status} {title}: {detail} [{:.2}s, limit {limit_secs}s]\n",
        elapsed.as_secs_f64()
    );
    std::io::stdout().lock().write_all(line.as_bytes()).unwrap();
    assert!(pass, "criterion {number} ({title}) failed: {detail}");
    assert!(in_time, "criterion {number} ({title}) exceeded {limit_secs}s");
}

fn holds(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs * (1.0 + RELATIVE_SLACK)
}

fn seeded_function(seed: u64, dim: usize, depth: u32) -> StepFunction {
    let grid = DyadicGrid::unit(dim, depth).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let ties = seed.is_multiple_of(2);
    let values = (0..grid.cell_count())
        .map(|_| if ties { rng.gen_range(-2..=4) as f64 } else { rng.gen_range(-3.0..6.0) })
        .collect();
    StepFunction::new(grid, values).unwrap()
}

/// Literal `inf { a : |{f > a} ∩ Q| < s |Q| }` over candidate values.
fn threshold_scan(f: &StepFunction, cube: &DyadicCube, s: f64) -> f64 {
    let grid = f.grid();
    let cells = grid.cube_cells(cube);
    let q = grid.cube_measure(cube.level);
    cells
        .iter()
        .map(|&c| f.values()[c])
        .filter(|&a| cells.iter().filter(|&&d| f.values()[d] > a).count() as f64 * grid.cell_measure() < s * q)
        .fold(f64::INFINITY, f64::min)
}

fn corpus(dim: Option<usize>) -> Vec<(String, StepFunction)> {
    Manifest::pinned()
        .corpus()
        .into_iter()
        .filter(|c| dim.is_none_or(|d| c.dim == d))
        .map(|c| (c.label(), c.sample().unwrap()))
        .collect()
}

fn failures(reports: &[(String, VerificationReport)]) -> Vec<String> {
    reports.iter().filter(|(_, r)| !r.pass).map(|(l, _)| l.clone()).collect()
}

#[test]
fn criterion_01_median_oracle_equivalence() {
    let start = Instant::now();
    let mut mismatches = 0usize;
    let mut comparisons = 0usize;
    for seed in 0..1000u64 {
        let (dim, depth) = if seed % 2 == 0 { (1, 1 + (seed / 2) as u32 % 6) } else { (2, 1 + (seed / 2) as u32 % 3) };
        let f = seeded_function(seed, dim, depth);
        for cube in f.grid().all_cubes() {
            for s in [1.0 / 16.0, 0.25, 0.5, 1.0] {
                comparisons += 1;
                if maximal_median(&f, &cube, s).unwrap() != threshold_scan(&f, &cube, s) {
                    mismatches += 1;
                }
            }
        }
    }
    report_line(
        1,
        "median oracle equivalence",
        mismatches == 0,
        &format!("{comparisons} comparisons, {mismatches} mismatches"),
        start.elapsed(),
        10.0,
    );
}

#[test]
fn criterion_02_median_property_suite() {
    let start = Instant::now();
    let r = run_median_property_suite(1000, &[1, 2], &[4, 3]).unwrap();
    let worst = r.rows.iter().map(|row| row.lhs).fold(0.0, f64::max);
    let failing: Vec<&str> = r.rows.iter().filter(|row| !row.holds()).map(|row| row.case.as_str()).collect();
    report_line(
        2,
        "median order properties",
        r.pass && r.rows.len() >= 10,
        &format!("{} properties, largest defect {worst:e} (tolerance 1e-12), failing {failing:?}", r.rows.len()),
        start.elapsed(),
        30.0,
    );
}

#[test]
fn criterion_03_dp_matches_bruteforce() {
    let start = Instant::now();
    let modes = [
        SeminormConfig::avg_mean(2.0),
        SeminormConfig::med_optimal(2.0, 0.25),
        SeminormConfig::med_center(2.0, 0.125, 0.5),
    ];
    let mut mismatches = Vec::new();
    for seed in 0..200u64 {
        let f = seeded_function(10_000 + seed, 1, 1 + seed as u32 % 4);
        for cfg in &modes {
            let dp = jn_seminorm(&f, cfg).unwrap().value_pow;
            let bf = jn_seminorm_bruteforce(&f, cfg).unwrap().value_pow;
            if dp.to_bits() != bf.to_bits() {
                mismatches.push((seed, cfg.mode.name(), dp, bf));
            }
        }
    }
    report_line(
        3,
        "recursion equals antichain enumeration",
        mismatches.is_empty(),
        &format!("600 comparisons, bit mismatches {mismatches:?}"),
        start.elapsed(),
        20.0,
    );
}

fn cz_corpus() -> Vec<StepFunction> {
    (0..100u64)
        .map(|seed| if seed % 2 == 0 { seeded_function(20_000 + seed, 1, 6) } else { seeded_function(20_000 + seed, 2, 3) })
        .collect()
}

fn lambda_points(lo: f64, scale: f64) -> Vec<f64> {
    let lo = lo.max(1e-3 * scale).max(1e-12);
    LambdaGrid::new(lo, (2.0 * scale).max(lo), 20).unwrap().points()
}

#[test]
fn criterion_04_cz_properties() {
    let start = Instant::now();
    let mut violations = Vec::new();
    let mut checked = 0usize;
    for (i, f) in cz_corpus().iter().enumerate() {
        let t = if i % 4 < 2 { 0.5 } else { 0.25 };
        let abs = f.abs();
        let pyramid = MedianPyramid::new(f, t).unwrap();
        let maximal = median_maximal_function(f, t).unwrap();
        for lambda in lambda_points(pyramid.root(), f.max_abs()) {
            checked += 1;
            let cz = pyramid.decompose(lambda).unwrap();
            let cubes = cz.cubes.cubes();
            if !cubes.iter().all(|q| threshold_scan(&abs, q, t) > lambda) {
                violations.push((i, lambda, "selected cube not above level"));
            }
            if !cubes.iter().all(|q| q.parent().is_some_and(|p| threshold_scan(&abs, &p, t) <= lambda)) {
                violations.push((i, lambda, "parent above level"));
            }
            let disjoint = cubes
                .iter()
                .enumerate()
                .all(|(a, qa)| cubes.iter().skip(a + 1).all(|qb| qa.interiors_disjoint(qb)));
            if !disjoint {
                violations.push((i, lambda, "overlapping cubes"));
            }
            let mask = cz.cubes.cell_mask(f.grid());
            if f.values().iter().zip(&mask).any(|(v, inside)| !inside && v.abs() > lambda) {
                violations.push((i, lambda, "large value outside the union"));
            }
            let (_, measure) = level_set(f, t, lambda).unwrap();
            if measure != maximal.measure_where(|v| v > lambda) {
                violations.push((i, lambda, "level-set measure mismatch"));
            }
        }
    }
    report_line(
        4,
        "median Calderón–Zygmund properties",
        violations.is_empty(),
        &format!("{checked} (function, λ) pairs, violations {violations:?}"),
        start.elapsed(),
        20.0,
    );
}

#[test]
fn criterion_05_weak_type() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut failed = 0usize;
    for f in cz_corpus() {
        let m = maximal_avg(&f);
        let l1 = f.values().iter().map(|v| v.abs()).sum::<f64>() * f.grid().cell_measure();
        for lambda in lambda_points(0.0, m.max_abs()) {
            let lhs = lambda * m.measure_where(|v| v > lambda);
            worst = worst.max(lhs / l1);
            if !holds(lhs, l1) {
                failed += 1;
            }
        }
    }
    report_line(
        5,
        "weak type (1,1)",
        failed == 0,
        &format!("max λ|{{Mf > λ}}|/‖f‖₁ = {worst:.12}, failures {failed}"),
        start.elapsed(),
        10.0,
    );
}

#[test]
fn criterion_06_jn_inequality() {
    let start = Instant::now();
    let c2 = jn_constant(2.0);
    let closed_form = 32.0 / (2f64.sqrt() - 1.0).powi(2);
    let mut ok = (c2 - closed_form).abs() <= 1e-12 * closed_form && (c2 - 186.51).abs() < 0.005;
    let corpus = corpus(Some(1));
    ok &= corpus.len() == 100
        && corpus.iter().any(|(l, _)| l.contains("log-reciprocal"))
        && corpus.iter().any(|(l, _)| l.contains("jn-extremal"));
    let mut detail = Vec::new();
    for p in [1.5, 2.0, 4.0] {
        let reports: Vec<(String, VerificationReport)> = corpus
            .iter()
            .map(|(l, f)| (l.clone(), verify_jn_inequality(f, p, 1.0 / 16.0, 0.5, None).unwrap()))
            .collect();
        let empirical = reports.iter().filter_map(|(_, r)| r.empirical_constant).fold(0.0, f64::max);
        let theoretical = jn_constant(p);
        let bad = failures(&reports);
        ok &= bad.is_empty() && empirical <= theoretical;
        detail.push(format!("p={p}: empirical {empirical:.4} <= {theoretical:.4} failing {bad:?}"));
    }
    report_line(6, "John–Nirenberg distribution inequality", ok, &detail.join("; "), start.elapsed(), 60.0);
}

#[test]
fn criterion_07_good_lambda() {
    let start = Instant::now();
    let mut reports = Vec::new();
    for (label, f) in corpus(Some(1)) {
        reports.push((label.clone(), verify_good_lambda(&f, 2.0, 0.25, 2.0, 1.0 / 32.0, None).unwrap()));
        let root = MedianPyramid::new(&f, 0.25).unwrap().root();
        let scale = f.max_abs().max(1e-300);
        let lo = root.max(1e-4 * scale);
        let grid = LambdaGrid::new(lo, (8.0 * scale).max(lo), 25).unwrap();
        reports.push((format!("{label} wide"), verify_good_lambda(&f, 2.0, 0.25, 2.0, 1.0 / 32.0, Some(grid)).unwrap()));
    }
    let worst = reports.iter().filter_map(|(_, r)| r.empirical_constant).fold(0.0, f64::max);
    let bad = failures(&reports);
    report_line(
        7,
        "good-λ inequality (t, K, p, s) = (1/4, 2, 2, 1/32)",
        bad.is_empty(),
        &format!("{} reports, worst lhs/rhs {worst:.6}, failing {bad:?}", reports.len()),
        start.elapsed(),
        60.0,
    );
}

#[test]
fn criterion_08_equivalence_and_center_comparison() {
    let start = Instant::now();
    let mut eq = Vec::new();
    let mut cc = Vec::new();
    for (label, f) in corpus(None) {
        let s = 2f64.powi(-(f.grid().dim() as i32 + 3));
        eq.push((label.clone(), verify_equivalence(&f, 2.0, s).unwrap()));
        cc.push((label.clone(), verify_center_comparison(&f, 2.0, 0.25, 0.5).unwrap()));
        cc.push((format!("{label} s=1/16"), verify_center_comparison(&f, 2.0, 1.0 / 16.0, 0.25).unwrap()));
    }
    let range = |rs: &[(String, VerificationReport)]| {
        let v: Vec<f64> = rs.iter().filter_map(|(_, r)| r.empirical_constant).collect();
        (v.iter().copied().fold(f64::INFINITY, f64::min), v.iter().copied().fold(0.0, f64::max))
    };
    let (eq_lo, eq_hi) = range(&eq);
    let (cc_lo, cc_hi) = range(&cc);
    let bad: Vec<String> = failures(&eq).into_iter().chain(failures(&cc)).collect();
    report_line(
        8,
        "seminorm equivalence and center comparison",
        bad.is_empty(),
        &format!(
            "‖f‖_avg/‖f‖_med in [{eq_lo:.4}, {eq_hi:.4}] (bound {:.2}); centered/optimal in [{cc_lo:.4}, {cc_hi:.4}] (bound 4); failing {bad:?}",
            eq[0].1.theoretical_constant.unwrap()
        ),
        start.elapsed(),
        60.0,
    );
}

#[test]
fn criterion_09_l1_bound_and_divergence() {
    let start = Instant::now();
    let reports: Vec<(String, VerificationReport)> =
        corpus(None).into_iter().map(|(l, f)| (l, verify_l1_bound(&f, 2.0).unwrap())).collect();
    let depths: Vec<u32> = (8..=16).collect();
    let sweep = extremal_depth_sweep(&depths, 2.0).unwrap();
    let bound_ok = failures(&reports).is_empty() && sweep.pass;
    let growth = sweep.extras["growth"];
    let monotone = sweep.extras["monotone"] == 1.0;

    let exact = FunctionSpec::new(CatalogEntry::JnExtremal).with_rule(SamplingRule::ExactCellAverage);
    let integral = |depth| maximal_integral(&sample_catalog(&exact, &exact.grid(1, depth).unwrap()).unwrap());
    let exact_growth = integral(16) / integral(8);

    report_line(
        9,
        "L1 bound for (Mf)^(1/p) and growth of ∫Mf",
        bound_ok && monotone && growth > 1.5,
        &format!(
            "bound holds on corpus and J=8..16: {bound_ok}; ∫Mf increasing in J: {monotone}; \
             ∫Mf(J=16)/∫Mf(J=8) = {growth:.4} midpoint, {exact_growth:.4} cell averages (required > 1.5)"
        ),
        start.elapsed(),
        120.0,
    );
}

#[test]
fn criterion_10_maximal_bound() {
    let start = Instant::now();
    let reports: Vec<(String, VerificationReport)> =
        corpus(None).into_iter().map(|(l, f)| (l, verify_maximal_bound(&f, 2.0).unwrap())).collect();
    let worst = reports.iter().filter_map(|(_, r)| r.empirical_constant).fold(0.0, f64::max);
    let bound = 2.0 * jn_constant(2.0) * 2.0;
    let bad = failures(&reports);
    report_line(
        10,
        "maximal operator bound with constant 2cp/(p-1)",
        bad.is_empty() && worst <= bound,
        &format!("max ‖Mf‖/‖f‖ = {worst:.4} <= {bound:.2}, failing {bad:?}"),
        start.elapsed(),
        60.0,
    );
}

#[test]
fn criterion_11_differentiation() {
    let start = Instant::now();
    let r = sine_differentiation(10).unwrap();
    let bound = 2.0 * std::f64::consts::PI * 2f64.powi(-10);
    let finest = r
        .rows
        .iter()
        .filter(|row| row.params["level"] == 10.0 && row.params["s"] == 0.5)
        .map(|row| row.lhs)
        .fold(0.0, f64::max);

    // Level-10 cubes of sin(2πx) resolved on a depth-16 grid, against the
    // value at each cube's midpoint.
    let fine = sample_catalog(
        &FunctionSpec::new(CatalogEntry::SmoothLipschitz { amplitude: 1.0, frequency: 1.0 }),
        &DyadicGrid::unit(1, 16).unwrap(),
    )
    .unwrap();
    let resolved = fine
        .grid()
        .cubes_at(10)
        .map(|q| {
            let mid = (q.index[0] as f64 + 0.5) * 2f64.powi(-10);
            (threshold_scan(&fine, &q, 0.5) - (2.0 * std::f64::consts::PI * mid).sin()).abs()
        })
        .fold(0.0, f64::max);
    report_line(
        11,
        "median differentiation for sin(2πx)",
        r.pass && finest <= bound && resolved <= bound,
        &format!(
            "error at level 10 vs samples {finest:e}, vs midpoints on a depth-16 grid {resolved:e}, bound {bound:e}; all {} level rows hold: {}",
            r.rows.len(),
            r.pass
        ),
        start.elapsed(),
        5.0,
    );
}

#[test]
fn criterion_12_cli_suite_determinism() {
    let start = Instant::now();
    let run = || Command::new(env!("CARGO_BIN_EXE_jn")).arg("suite").output().expect("jn suite runs");
    let a = run();
    let b = run();
    let identical = a.stdout == b.stdout && !a.stdout.is_empty();
    let codes = (a.status.code(), b.status.code());
    report_line(
        12,
        "CLI suite determinism",
        identical && codes == (Some(0), Some(0)),
        &format!("byte-identical: {identical} ({} bytes), exit codes {codes:?}", a.stdout.len()),
        start.elapsed(),
        f64::INFINITY,
    );
}
