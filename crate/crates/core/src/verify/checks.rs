//! Inequality checks on a single step function.

use crate::czd::MedianPyramid;
use crate::error::{Error, Result};
use crate::grid::StepFunction;
use crate::maximal::maximal_avg;
use crate::median::maximal_median_of;
use crate::seminorm::{jn_seminorm, SeminormConfig};

use super::report::{LambdaGrid, Row, VerificationReport};

/// Distribution constant of the dyadic John–Nirenberg inequality,
/// `2^{p+3} (2^{1/p} - 1)^{-p}`.
pub fn jn_constant(p: f64) -> f64 {
    2f64.powf(p + 3.0) * (2f64.powf(1.0 / p) - 1.0).powf(-p)
}

/// `2cp/(p-1)` with `c = jn_constant(p)`: the upper constant relating the
/// average and median seminorms, also used for the maximal operator bound.
pub fn equivalence_constant(p: f64) -> f64 {
    2.0 * jn_constant(p) * p / (p - 1.0)
}

/// `2^{p+1} (p/(p-1))^p`.
pub fn l1_bound_constant(p: f64) -> f64 {
    2f64.powf(p + 1.0) * (p / (p - 1.0)).powf(p)
}

fn precondition(msg: String) -> Error {
    Error::Precondition(msg)
}

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        Err(precondition(format!("p must be a finite number > 1, got {p}")))
    }
}

fn check_jn_s(s: f64, dim: usize) -> Result<()> {
    let bound = 2f64.powi(-(dim as i32 + 3));
    if s > 0.0 && s <= bound {
        Ok(())
    } else {
        Err(precondition(format!("s must satisfy 0 < s <= 2^-(n+3) = {bound}, got {s}")))
    }
}

/// `sup_{λ>0} λ^q |{v > λ}|`, attained in the limit `λ ↑ a` at some value `a`,
/// i.e. `max_a a^q |{v >= a}|`.
pub fn tail_sup(values: &[f64], cell_measure: f64, q: f64) -> f64 {
    let mut sorted: Vec<f64> = values.iter().copied().filter(|v| *v > 0.0).collect();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut best: f64 = 0.0;
    for (i, &a) in sorted.iter().enumerate() {
        if i + 1 == sorted.len() || sorted[i + 1] < a {
            best = best.max(a.powf(q) * (i + 1) as f64 * cell_measure);
        }
    }
    best
}

fn measure_above(values: &[f64], lambda: f64, cell_measure: f64) -> f64 {
    values.iter().filter(|&&v| v > lambda).count() as f64 * cell_measure
}

fn check_grid_floor(points: &[f64], floor: f64) -> Result<()> {
    match points.iter().find(|&&l| l < floor) {
        Some(l) => Err(Error::BelowRootMedian { lambda: *l, root_median: floor }),
        None => Ok(()),
    }
}

/// Good-λ estimate for the median maximal function
///
/// `|E_{Kλ}| <= 2^p/(K-1)^p ‖f‖^p/λ^p + |E_λ|/(2K^p)`,
///
/// where `E_λ = {M^{d,t} f > λ}` and `‖f‖` is the `med-optimal` seminorm with
/// parameter `s`.
pub fn verify_good_lambda(
    f: &StepFunction,
    p: f64,
    t: f64,
    k: f64,
    s: f64,
    grid: Option<LambdaGrid>,
) -> Result<VerificationReport> {
    check_p(p)?;
    let dim = f.grid().dim();
    let t_max = 2f64.powi(-(dim as i32 + 1));
    if !(t > 0.0 && t <= t_max) {
        return Err(precondition(format!("t must satisfy 0 < t <= 2^-(n+1) = {t_max}, got {t}")));
    }
    if !(k.is_finite() && k > 1.0) {
        return Err(precondition(format!("K must be a finite number > 1, got {k}")));
    }
    let s_max = t / (2.0 * k.powf(p));
    if !(s > 0.0 && s <= s_max) {
        return Err(precondition(format!("s must satisfy 0 < s <= t/(2K^p) = {s_max}, got {s}")));
    }

    let pyramid = MedianPyramid::new(f, t)?;
    let root = pyramid.root();
    let points = grid.unwrap_or_else(|| LambdaGrid::default_for(root, f.max_abs())).points();
    check_grid_floor(&points, root)?;
    let semi = jn_seminorm(f, &SeminormConfig::med_optimal(p, s))?.value_pow;

    let level_measure = |lambda: f64| -> Result<f64> {
        Ok(pyramid.decompose(lambda)?.cubes.union_measure(f.grid()))
    };
    let mut report = VerificationReport::new(
        "good-lambda",
        &[("p", p), ("t", t), ("K", k), ("s", s), ("root_median", root), ("seminorm_pow", semi)],
    );
    let factor = 2f64.powf(p) / (k - 1.0).powf(p);
    let mut worst: f64 = 0.0;
    for lambda in points {
        let lhs = level_measure(k * lambda)?;
        let rhs = factor * semi / lambda.powf(p) + level_measure(lambda)? / (2.0 * k.powf(p));
        let row = Row::new("", &[("lambda", lambda)], lhs, rhs);
        worst = worst.max(row.ratio());
        report.push(row);
    }
    report.empirical_constant = Some(worst);
    report.theoretical_constant = Some(1.0);
    Ok(report.finish())
}

/// Distribution inequality
/// `|{|f - m^r_f(Q0)| > λ}| <= c ‖f‖^p / λ^p` with `c = jn_constant(p)`.
///
/// Besides the λ-grid rows, a `sup` row compares the exact supremum over all
/// `λ > 0` of `λ^p |{..> λ}|` with `c ‖f‖^p`.
pub fn verify_jn_inequality(
    f: &StepFunction,
    p: f64,
    s: f64,
    r: f64,
    grid: Option<LambdaGrid>,
) -> Result<VerificationReport> {
    check_p(p)?;
    check_jn_s(s, f.grid().dim())?;
    if !(r >= s && r <= 0.5) {
        return Err(precondition(format!("r must satisfy s <= r <= 1/2, got r = {r}, s = {s}")));
    }
    let center = maximal_median_of(f.values(), r);
    let dev: Vec<f64> = f.values().iter().map(|v| (v - center).abs()).collect();
    let cell = f.grid().cell_measure();
    let semi = jn_seminorm(f, &SeminormConfig::med_optimal(p, s))?.value_pow;
    let scale = dev.iter().copied().fold(0.0, f64::max);
    if semi == 0.0 && scale > 0.0 {
        return Err(Error::Internal(
            "zero median seminorm with a nonzero distribution function".into(),
        ));
    }
    let c = jn_constant(p);
    let points = grid.unwrap_or_else(|| LambdaGrid::default_for(0.0, scale)).points();

    let mut report = VerificationReport::new(
        "jn-inequality",
        &[("p", p), ("s", s), ("r", r), ("center", center), ("seminorm_pow", semi), ("c", c)],
    );
    let mut empirical: f64 = 0.0;
    for lambda in points {
        let lhs = lambda.powf(p) * measure_above(&dev, lambda, cell);
        if semi > 0.0 {
            empirical = empirical.max(lhs / semi);
        }
        report.push(Row::new("", &[("lambda", lambda)], lhs, c * semi));
    }
    let sup = tail_sup(&dev, cell, p);
    if semi > 0.0 {
        empirical = empirical.max(sup / semi);
    }
    report.push(Row::new("sup", &[], sup, c * semi));
    report.empirical_constant = Some(empirical);
    report.theoretical_constant = Some(c);
    Ok(report.finish())
}

/// Two-sided comparison of the average and median seminorms,
/// `s ‖f‖_med <= ‖f‖_avg <= (2cp/(p-1)) ‖f‖_med`.
pub fn verify_equivalence(f: &StepFunction, p: f64, s: f64) -> Result<VerificationReport> {
    check_p(p)?;
    check_jn_s(s, f.grid().dim())?;
    let avg = jn_seminorm(f, &SeminormConfig::avg_mean(p))?.value;
    let med = jn_seminorm(f, &SeminormConfig::med_optimal(p, s))?.value;
    let c = jn_constant(p);
    let upper = equivalence_constant(p);
    let mut report = VerificationReport::new(
        "equivalence",
        &[("p", p), ("s", s), ("c", c), ("avg_seminorm", avg), ("median_seminorm", med)],
    );
    report.push(Row::new("lower", &[], s * med, avg));
    report.push(Row::new("upper", &[], avg, upper * med));
    if med > 0.0 {
        report.empirical_constant = Some(avg / med);
    }
    if avg > 0.0 {
        report.extra("lower_ratio", s * med / avg);
    }
    report.theoretical_constant = Some(upper);
    Ok(report.finish())
}

/// Fixed-center versus optimal-center median seminorms:
/// `A <= B <= 2^p A` with `A = ‖f‖^p` for `med-optimal(s)` and `B` the same
/// supremum with oscillation `m^s_{|f - m^t_f(Q)|}(Q)`.
pub fn verify_center_comparison(f: &StepFunction, p: f64, s: f64, t: f64) -> Result<VerificationReport> {
    check_p(p)?;
    if !(s > 0.0 && s <= t && t <= 0.5) {
        return Err(precondition(format!("need 0 < s <= t <= 1/2, got s = {s}, t = {t}")));
    }
    let optimal = jn_seminorm(f, &SeminormConfig::med_optimal(p, s))?.value_pow;
    let centered = jn_seminorm(f, &SeminormConfig::med_center(p, s, t))?.value_pow;
    let factor = 2f64.powf(p);
    let mut report = VerificationReport::new(
        "center-comparison",
        &[("p", p), ("s", s), ("t", t), ("optimal_pow", optimal), ("centered_pow", centered)],
    );
    report.push(Row::new("lower", &[], optimal, centered));
    report.push(Row::new("upper", &[], centered, factor * optimal));
    if optimal > 0.0 {
        report.empirical_constant = Some(centered / optimal);
    }
    report.theoretical_constant = Some(factor);
    Ok(report.finish())
}

/// `‖M^d f‖_avg <= (2cp/(p-1)) ‖f‖_avg` for the `avg-mean` seminorm.
pub fn verify_maximal_bound(f: &StepFunction, p: f64) -> Result<VerificationReport> {
    check_p(p)?;
    let cfg = SeminormConfig::avg_mean(p);
    let input = jn_seminorm(f, &cfg)?.value;
    let output = jn_seminorm(&maximal_avg(f), &cfg)?.value;
    let bound = equivalence_constant(p);
    let mut report = VerificationReport::new(
        "maximal-bound",
        &[("p", p), ("c", jn_constant(p)), ("input_seminorm", input), ("output_seminorm", output)],
    );
    if input > 0.0 {
        report.push(Row::new("", &[], output, bound * input));
        report.empirical_constant = Some(output / input);
    } else {
        report.push(Row::new("value-only", &[], output, 0.0));
    }
    report.theoretical_constant = Some(bound);
    Ok(report.finish())
}

/// `∫ (M^d f)` over the root, i.e. `‖(M^d f)^{1/p}‖_p^p`.
pub fn maximal_integral(f: &StepFunction) -> f64 {
    maximal_avg(f).values().iter().sum::<f64>() * f.grid().cell_measure()
}

/// `‖(M^d f)^{1/p}‖^p_avg <= 2^{p+1} (p/(p-1))^p ‖f‖_1`.
pub fn verify_l1_bound(f: &StepFunction, p: f64) -> Result<VerificationReport> {
    check_p(p)?;
    let root = maximal_avg(f).map(|v| v.powf(1.0 / p))?;
    let lhs = jn_seminorm(&root, &SeminormConfig::avg_mean(p))?.value_pow;
    let l1 = f.values().iter().map(|v| v.abs()).sum::<f64>() * f.grid().cell_measure();
    let c = l1_bound_constant(p);
    let mut report = VerificationReport::new("l1-bound", &[("p", p), ("l1", l1)]);
    report.push(Row::new("", &[], lhs, c * l1));
    if l1 > 0.0 {
        report.empirical_constant = Some(lhs / l1);
    }
    report.theoretical_constant = Some(c);
    report.extra("maximal_integral", maximal_integral(f));
    Ok(report.finish())
}

/// `|{M^d f > λ}| <= ‖f‖_1 / λ`, plus a `sup` row with the exact weak-L1
/// quasinorm `sup_λ λ |{M^d f > λ}|` against `‖f‖_1`.
pub fn verify_weak_type(f: &StepFunction, grid: Option<LambdaGrid>) -> Result<VerificationReport> {
    let maximal = maximal_avg(f);
    let cell = f.grid().cell_measure();
    let l1 = f.values().iter().map(|v| v.abs()).sum::<f64>() * cell;
    let scale = maximal.max_abs();
    let points = grid.unwrap_or_else(|| LambdaGrid::default_for(0.0, scale)).points();
    let mut report = VerificationReport::new("weak-type", &[("l1", l1)]);
    for lambda in points {
        let lhs = measure_above(maximal.values(), lambda, cell);
        report.push(Row::new("", &[("lambda", lambda)], lhs, l1 / lambda));
    }
    let sup = tail_sup(maximal.values(), cell, 1.0);
    report.push(Row::new("sup", &[], sup, l1));
    if l1 > 0.0 {
        report.empirical_constant = Some(sup / l1);
    }
    report.theoretical_constant = Some(1.0);
    Ok(report.finish())
}

/// Structural properties of the median stopping-time decomposition on a
/// λ-grid. Each row counts violations, so `rhs = 0`:
///
/// * `selected-above`: selected cubes with `m^t_{|f|} <= λ`;
/// * `parent-below`: selected cubes whose parent has `m^t_{|f|} > λ`;
/// * `outside-bounded`: cells outside the union with `|f| > λ`;
/// * `level-set`: cells where the union and `{M^{d,t} f > λ}` disagree;
/// * `antichain`: 1 if a selected cube contains another;
/// * `monotone`: cells in the union at λ missing from the union at the
///   previous, smaller λ.
pub fn verify_cz(f: &StepFunction, t: f64, grid: Option<LambdaGrid>) -> Result<VerificationReport> {
    let pyramid = MedianPyramid::new(f, t)?;
    let root = pyramid.root();
    let mut points = grid.unwrap_or_else(|| LambdaGrid::default_for(root, f.max_abs())).points();
    check_grid_floor(&points, root)?;
    points.sort_by(f64::total_cmp);
    let maximal = pyramid.ancestor_max();
    let g = f.grid();
    let mut report = VerificationReport::new("cz", &[("t", t), ("root_median", root)]);
    let mut previous: Option<Vec<bool>> = None;
    for lambda in points {
        let cz = pyramid.decompose(lambda)?;
        let cubes = cz.cubes.cubes();
        let above = cubes.iter().filter(|q| pyramid.get(q) <= lambda).count();
        let parent = cubes
            .iter()
            .filter(|q| q.parent().is_some_and(|p| pyramid.get(&p) > lambda))
            .count();
        let mask = cz.cubes.cell_mask(g);
        let outside = f
            .values()
            .iter()
            .zip(&mask)
            .filter(|(v, inside)| !**inside && v.abs() > lambda)
            .count();
        let level = maximal.iter().zip(&mask).filter(|(m, inside)| (**m > lambda) != **inside).count();
        let antichain = usize::from(!cz.cubes.is_antichain());
        let monotone = previous
            .as_ref()
            .map_or(0, |prev| mask.iter().zip(prev).filter(|(now, before)| **now && !**before).count());
        let at = [("lambda", lambda)];
        for (case, count) in [
            ("selected-above", above),
            ("parent-below", parent),
            ("outside-bounded", outside),
            ("level-set", level),
            ("antichain", antichain),
            ("monotone", monotone),
        ] {
            report.push(Row::new(case, &at, count as f64, 0.0));
        }
        previous = Some(mask);
    }
    Ok(report.finish())
}
