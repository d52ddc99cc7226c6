//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong across the model, special-function,
/// reduction and solver layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// |V0| > lambda (mu outside [-1, 1]) or V0 = 0 (rotation degenerates).
    #[error("invalid potential strength v0 = {v0}: require 0 < |v0| <= lambda = {lambda}")]
    InvalidStrength { v0: f64, lambda: f64 },

    /// kappa must be a nonzero integer.
    #[error("invalid spin-orbit quantum number kappa = {0}: must be nonzero")]
    InvalidKappa(i32),

    /// lambda must be positive (it is an inverse screening length).
    #[error("invalid screening parameter lambda = {0}: must be positive")]
    InvalidLambda(f64),

    /// mass must be positive.
    #[error("invalid mass {0}: must be positive")]
    InvalidMass(f64),

    /// A Pochhammer factor (c)_k vanished while summing the terminating
    /// hypergeometric series.
    #[error("pochhammer pole: (c)_k vanishes at c = {c}, k = {k}")]
    PochhammerPole { c: f64, k: u32 },

    /// Both the hypergeometric form and the three-term recurrence for a
    /// Jacobi polynomial hit a pole.
    #[error("jacobi parameter degeneracy at n = {n}, a = {a}, b = {b}")]
    ParameterDegeneracy { n: u32, a: f64, b: f64 },

    /// The positive-branch component relation divides by mC + eps; eps too
    /// close to -mC.
    #[error("component relation invalid: eps = {eps} too close to -m*cos(theta) = {neg_mc}")]
    ValidityViolation { eps: f64, neg_mc: f64 },

    /// A rotation was requested on a pair already in the target basis.
    #[error("spinor pair already in the requested basis")]
    BasisMismatch,

    /// A grid with fewer points than the operation needs.
    #[error("grid is empty or too short for the requested stencil")]
    EmptyGrid,

    /// Formula index beyond the range where the closed-form energy is real.
    #[error("level index {n} beyond the spectrum (discriminant negative)")]
    IndexBeyondSpectrum { n: u32 },

    /// The closed-form level count is undefined (lambda*|kappa| > m); the
    /// bound spectrum is reported as absent rather than guessed.
    #[error("no bound levels: lambda*|kappa| = {lam_kap} exceeds mass {mass}")]
    NoBoundLevels { lam_kap: f64, mass: f64 },

    /// An exponent of the Eckart bound-state ansatz turned imaginary.
    #[error("complex exponent: energy {eps} outside the bound-state window")]
    ComplexExponent { eps: f64 },

    /// Solver configuration violates its invariants (0 < r_min < r_max,
    /// num_points >= 100, eps_tol >= 1e-12, stencil order 2 or 4).
    #[error("invalid oracle configuration")]
    InvalidConfig,

    /// Two consecutive grid refinements of the eigensolver disagree.
    #[error(
        "grid too coarse: refinement changed the eigenvalue by {delta:.3e} (allowed {allowed:.3e})"
    )]
    GridTooCoarse { delta: f64, allowed: f64 },

    /// No sign change of the secular function / matching determinant was
    /// found for the requested level.
    #[error("no root found for level {k}")]
    NoRoot { k: usize },

    /// The root search found several candidates for one level.
    #[error("multiple root candidates for level {k}: {candidates:?}")]
    MultipleRoots { k: usize, candidates: Vec<f64> },

    /// Adaptive step control underflowed during the shooting integration.
    #[error("stiff integration: step size underflow at r = {r}")]
    StiffIntegration { r: f64 },

    /// The power-law startup of the shooting solver is undefined
    /// (|mu| > |kappa| makes the indicial exponent imaginary).
    #[error(
        "shooting initialization failed: indicial exponent imaginary (mu = {mu}, kappa = {kappa})"
    )]
    InitializationFailure { mu: f64, kappa: i32 },

    /// The normalization quadrature could not reach its tolerance.
    #[error("quadrature failure: tail estimate {tail:.3e} exceeds tolerance {tol:.3e}")]
    QuadratureFailure { tail: f64, tol: f64 },
}
