//! Numerical eigensolvers used to validate the closed forms: a
//! Sturm-bisection finite-difference solver for the second-order reduction
//! ([`fd`]) and a phase-function shooting solver for the first-order system
//! itself ([`shoot`]), plus the generic tridiagonal machinery ([`sturm`]).

pub mod fd;
pub mod shoot;
pub mod sturm;

use crate::error::Error;
use crate::model::ProblemParams;
use crate::Result;

pub use fd::{
    fd_eigenvalues, fd_spectrum, solve_secular, FrozenMesh, SecularFunction, SecularRoot,
};
pub use shoot::{dirac_shoot, dirac_spectrum_shooting, phase_mismatch, ShootingRoot};

/// Grid extent, resolution and tolerances for the numerical solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Mesh start (> 0; the singular origin is approached logarithmically).
    pub r_min: f64,
    /// Cap on the mesh extent; the solvers shrink it to the actual decay.
    pub r_max: f64,
    /// Interior mesh points of the finite-difference solver.
    pub num_points: usize,
    /// Target relative accuracy of returned energies.
    pub eps_tol: f64,
    /// Resolution of the energy scan that brackets bound states.
    pub scan_points: usize,
    /// 2 = single grid, 4 = one Richardson refinement (N and 2N meshes).
    pub stencil_order: u32,
}

impl OracleConfig {
    /// Defaults scaled to the problem's screening length.
    pub fn for_params(params: &ProblemParams) -> Self {
        Self {
            r_min: 1e-7 / params.lambda,
            r_max: 1e6 / params.lambda,
            num_points: 4000,
            eps_tol: 1e-8,
            scan_points: 320,
            stencil_order: 4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.r_min > 0.0
            && self.r_max > self.r_min
            && self.num_points >= 100
            && self.eps_tol >= 1e-12
            && self.scan_points >= 2
            && (self.stencil_order == 2 || self.stencil_order == 4);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig)
        }
    }
}
