//! Bound states of the radial Dirac equation coupled to 1/r-singular pure
//! vector potentials.
//!
//! The radial Dirac system for a spherically symmetric vector potential V(r)
//! (relativistic units, hbar = c = 1) is
//!
//! ```text
//! | m + V - eps     -d/dr + k/r |  | psi+ |
//! |                             |  |      |  =  0,
//! | d/dr + k/r     -m + V - eps |  | psi- |
//! ```
//!
//! with k the nonzero integer spin-orbit quantum number. Replacing the
//! orbital term k/r by k W(r), where W = V/mu matches the 1/r singularity of
//! the potential (mu = V0/lambda), makes the system solvable in closed form
//! for screened Coulomb-like potentials. This crate implements that solution
//! for the Hulthen potential V0/(e^{lambda r} - 1) and the 1/r-singular part
//! of the Eckart potential V0*coth(lambda r):
//!
//! * closed-form spectra, level counts and spinor wavefunctions
//!   ([`hulthen`], [`eckart`]),
//! * the rotated-basis reduction machinery behind them ([`reduction`]),
//! * terminating hypergeometric series and Jacobi polynomials ([`specfun`]),
//! * two independent numerical eigensolvers used to validate everything:
//!   a Sturm-bisection finite-difference solver for the Schrodinger-like
//!   second-order reduction and a phase-function shooting solver for the
//!   first-order system itself ([`oracle`]).

pub mod eckart;
pub mod error;
pub mod grid;
pub mod hulthen;
pub mod model;
pub mod oracle;
pub mod reduction;
pub mod specfun;

pub use error::Error;
pub use model::{Branch, DerivedParams, ProblemParams};
pub use reduction::{Basis, OrbitalTerm, PotentialProfile, SpinorPair};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
