//! Median-based dyadic analysis on step functions.
//!
//! Functions live on a dyadic grid over a root cube `Q0` and are constant on
//! the finest cells, so every operator below is evaluated exactly:
//!
//! * [`median`]: maximal `s`-medians `m^s_f(Q)` and median oscillations;
//! * [`czd`]: the median Calderón–Zygmund stopping time;
//! * [`maximal`]: the dyadic maximal operator `M^d` and its median variant;
//! * [`seminorm`]: dyadic John–Nirenberg seminorms by a maximum-weight
//!   antichain recursion on the dyadic tree, with a brute-force enumerator;
//! * [`verify`]: numerical checks of the John–Nirenberg, good-λ, weak type
//!   and maximal-function inequalities with their explicit constants.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod catalog;
pub mod cli;
pub mod czd;
pub mod error;
pub mod grid;
pub mod io;
pub mod maximal;
pub mod median;
pub mod seminorm;
pub mod verify;
mod tree;

pub use catalog::{sample_catalog, CatalogEntry, FunctionSpec, SamplingRule};
pub use czd::{cz_decompose, level_set, CZResult, CubeCollection, MedianPyramid};
pub use error::{Error, Result};
pub use grid::{DyadicCube, DyadicGrid, StepFunction};
pub use seminorm::{jn_seminorm, jn_seminorm_bruteforce, Mode, SeminormConfig, SeminormReport};
pub use tree::CubeTable;
