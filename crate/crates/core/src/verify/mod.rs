//! Numerical verification of the inequalities relating medians, maximal
//! functions and the dyadic seminorms.
//!
//! Every check evaluates both sides of an inequality exactly on a step
//! function and records them as [`Row`]s. A row holds when
//! `lhs <= rhs (1 + 1e-9)`; a report passes when all of its rows hold.

mod checks;
mod corpus;
mod properties;
mod report;
mod suite;

pub use checks::{
    equivalence_constant, jn_constant, l1_bound_constant, maximal_integral, tail_sup,
    verify_center_comparison, verify_cz, verify_equivalence, verify_good_lambda,
    verify_jn_inequality, verify_l1_bound, verify_maximal_bound, verify_weak_type,
};
pub use corpus::{BruteforcePlan, CorpusFunction, Manifest, PropertyPlan, RandomBlock, DEFAULT_MANIFEST};
pub use properties::{
    random_instance, run_median_property_suite, sine_differentiation, threshold_scan_median,
    verify_differentiation, PROPERTY_FRACTIONS, PROPERTY_NAMES, PROPERTY_TOLERANCE,
};
pub use report::{
    rows_to_csv, Counterexample, LambdaGrid, Row, VerificationReport, DEFAULT_LAMBDA_COUNT,
    RELATIVE_SLACK,
};
pub use suite::{
    bruteforce_modes, constants_chain, dp_vs_bruteforce, extremal_depth_sweep, good_lambda_params,
    jn_fraction, run_suite, SuiteConfig, SuiteReport, JN_EXPONENTS,
};
