//! Physical parameters, derived rotation quantities and bound-state
//! conditions shared by both potentials.
//!
//! The closed-form solutions rest on a global rotation of the two-component
//! radial spinor by a constant angle theta with sin(theta) = mu/kappa,
//! mu = V0/lambda. Everything downstream is written in terms of
//!
//! ```text
//! C = cos(theta) = sqrt(1 - (mu/kappa)^2),   gamma = kappa * C,
//! ```
//!
//! so gamma^2 + mu^2 = kappa^2 exactly.

use crate::error::Error;
use crate::Result;

/// Physical inputs in relativistic units (hbar = c = 1). The mass sets the
/// energy scale, `lambda` is the inverse screening length, `v0` the
/// potential strength and `kappa` the nonzero spin-orbit integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    pub mass: f64,
    pub lambda: f64,
    pub v0: f64,
    pub kappa: i32,
}

impl ProblemParams {
    /// Validates the invariants: lambda > 0, kappa != 0, 0 < |v0| <= lambda
    /// (so |mu| <= 1; real rotation), mass > 0.
    ///
    /// v0 = 0 is rejected: the rotation degenerates (the component relation
    /// carries a V/mu term) and the free problem has no bound states to
    /// report.
    pub fn new(mass: f64, lambda: f64, v0: f64, kappa: i32) -> Result<Self> {
        if !mass.is_finite() || mass <= 0.0 {
            return Err(Error::InvalidMass(mass));
        }
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::InvalidLambda(lambda));
        }
        if kappa == 0 {
            return Err(Error::InvalidKappa(kappa));
        }
        if v0 == 0.0 || !v0.is_finite() || v0.abs() > lambda {
            return Err(Error::InvalidStrength { v0, lambda });
        }
        Ok(Self {
            mass,
            lambda,
            v0,
            kappa,
        })
    }

    /// Dimensionless strength mu = V0/lambda, the coefficient of the 1/r
    /// singularity shared by both potentials.
    pub fn mu(&self) -> f64 {
        self.v0 / self.lambda
    }

    /// |mu| = |kappa| makes cos(theta) = 0; the lowest level sits exactly at
    /// zero energy and the component relation degenerates there. Such
    /// parameter sets are accepted but levels get flagged.
    pub fn is_critical(&self) -> bool {
        self.mu().abs() == self.kappa.abs() as f64
    }

    /// The map to the negative-energy representative: the negative spectrum
    /// of (m, lambda, V0, kappa) is the negated positive spectrum of this
    /// problem, and spinor components swap.
    pub fn charge_conjugate(&self) -> Self {
        Self {
            mass: self.mass,
            lambda: self.lambda,
            v0: -self.v0,
            kappa: -self.kappa,
        }
    }
}

/// Rotation quantities derived from [`ProblemParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// mu = V0/lambda.
    pub mu: f64,
    /// C = cos(theta) >= 0.
    pub cos_theta: f64,
    /// S = sin(theta) = mu/kappa.
    pub sin_theta: f64,
    /// gamma = kappa * C; gamma^2 + mu^2 = kappa^2.
    pub gamma: f64,
    /// theta = asin(mu/kappa), in [-pi/2, pi/2].
    pub theta: f64,
}

/// Computes mu, cos(theta), sin(theta), gamma and theta for valid inputs.
pub fn derive(params: &ProblemParams) -> Result<DerivedParams> {
    // re-validate so derive() is safe on hand-built structs
    let params = ProblemParams::new(params.mass, params.lambda, params.v0, params.kappa)?;
    let mu = params.mu();
    let kappa = params.kappa as f64;
    let sin_theta = mu / kappa;
    let cos_theta = (1.0 - sin_theta * sin_theta).max(0.0).sqrt();
    Ok(DerivedParams {
        mu,
        cos_theta,
        sin_theta,
        gamma: kappa * cos_theta,
        theta: sin_theta.asin(),
    })
}

/// Positive-energy solutions come from the top-sign equations; the negative
/// branch is reached only through the (eps, kappa, V0) -> (-eps, -kappa, -V0)
/// map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Positive,
    Negative,
}

/// Reality bound on the closed-form level parameters:
/// (eps + V0)^2 <= m^2 + lambda^2 kappa^2.
pub fn bound_condition_holds(eps: f64, params: &ProblemParams) -> bool {
    let lk = params.lambda * params.kappa as f64;
    let s = eps + params.v0;
    s * s <= params.mass * params.mass + lk * lk
}

/// Bound states require |eps| < m strictly.
pub fn is_bound_energy(eps: f64, mass: f64) -> bool {
    eps.abs() < mass
}
