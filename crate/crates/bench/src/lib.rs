//! Shared fixtures for the solver benchmarks.

use dirac_bound::ProblemParams;

/// The workhorse parameter point used across the benchmarks.
pub fn reference_params() -> ProblemParams {
    ProblemParams::new(1.0, 0.2, -0.15, -1).expect("valid reference parameters")
}
