//! Rotated-basis machinery: the effective Schrodinger-like potential, the
//! reconstruction of the lower spinor component from the upper one, and the
//! rotation back to the original basis.
//!
//! After the global rotation by theta (sin theta = mu/kappa), the top-sign
//! (positive-energy) first-order system reads
//!
//! ```text
//! (mC + 2V - eps) phi+ + [ -(mu/kappa) m + (gamma/mu) V - d/dr ] phi- = 0
//! [ -(mu/kappa) m + (gamma/mu) V + d/dr ] phi+ - (mC + eps) phi-   = 0
//! ```
//!
//! Eliminating phi- gives a Schrodinger-like equation
//! [-d^2/dr^2 + U_eff(r; eps)] phi+ = (eps^2 - m^2) phi+ with
//! U_eff = (gamma/mu) [ (gamma/mu) V^2 - V' ] + 2 eps V.

use crate::error::Error;
use crate::model::{DerivedParams, ProblemParams};
use crate::Result;

/// Which orbital term the first-order system carries: the exact kappa/r or
/// the approximated kappa*W(r) with W = V/mu.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitalTerm {
    ExactOrbital,
    ApproxOrbital,
}

/// The 1/r-singular vector potentials this crate treats. All of them behave
/// like mu/r near the origin, with mu = V0/lambda (or mu = strength for the
/// pure Coulomb benchmark profile).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialKind {
    /// V(r) = V0 / (e^{lambda r} - 1)
    Hulthen { v0: f64, lambda: f64 },
    /// V(r) = V0 coth(lambda r), the 1/r-singular part of the Eckart family
    EckartCore { v0: f64, lambda: f64 },
    /// V(r) = strength / r; exact and approximated orbital terms coincide
    Coulomb { strength: f64 },
}

/// A potential together with the orbital-term choice the solvers should use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialProfile {
    pub kind: PotentialKind,
    pub orbital: OrbitalTerm,
}

impl PotentialProfile {
    pub fn hulthen(params: &ProblemParams, orbital: OrbitalTerm) -> Self {
        Self {
            kind: PotentialKind::Hulthen {
                v0: params.v0,
                lambda: params.lambda,
            },
            orbital,
        }
    }

    pub fn eckart(params: &ProblemParams, orbital: OrbitalTerm) -> Self {
        Self {
            kind: PotentialKind::EckartCore {
                v0: params.v0,
                lambda: params.lambda,
            },
            orbital,
        }
    }

    pub fn coulomb(strength: f64) -> Self {
        Self {
            kind: PotentialKind::Coulomb { strength },
            orbital: OrbitalTerm::ExactOrbital,
        }
    }

    /// V(r). Stable near the origin through expm1 forms.
    pub fn v(&self, r: f64) -> f64 {
        match self.kind {
            PotentialKind::Hulthen { v0, lambda } => v0 / (lambda * r).exp_m1(),
            PotentialKind::EckartCore { v0, lambda } => {
                // coth(x) = 1 + 2/(e^{2x} - 1)
                v0 * (1.0 + 2.0 / (2.0 * lambda * r).exp_m1())
            }
            PotentialKind::Coulomb { strength } => strength / r,
        }
    }

    /// dV/dr.
    pub fn v_prime(&self, r: f64) -> f64 {
        match self.kind {
            PotentialKind::Hulthen { v0, lambda } => {
                let em1 = (lambda * r).exp_m1();
                -lambda * v0 * (lambda * r).exp() / (em1 * em1)
            }
            PotentialKind::EckartCore { v0, lambda } => {
                let s = (lambda * r).sinh();
                -lambda * v0 / (s * s)
            }
            PotentialKind::Coulomb { strength } => -strength / (r * r),
        }
    }

    /// Strength of the 1/r singularity: mu = lim r->0 r V(r).
    pub fn mu(&self) -> f64 {
        match self.kind {
            PotentialKind::Hulthen { v0, lambda } | PotentialKind::EckartCore { v0, lambda } => {
                v0 / lambda
            }
            PotentialKind::Coulomb { strength } => strength,
        }
    }

    /// The orbital profile W actually used by the first-order system under
    /// this profile's [`OrbitalTerm`] tag.
    pub fn orbital_w(&self, r: f64) -> f64 {
        match self.orbital {
            OrbitalTerm::ExactOrbital => 1.0 / r,
            OrbitalTerm::ApproxOrbital => self.v(r) / self.mu(),
        }
    }

    /// V at infinity (the continuum threshold shift of the Eckart core).
    pub fn v_at_infinity(&self) -> f64 {
        match self.kind {
            PotentialKind::EckartCore { v0, .. } => v0,
            _ => 0.0,
        }
    }

    /// W at infinity under the active orbital tag.
    pub fn w_at_infinity(&self) -> f64 {
        match (self.orbital, self.kind) {
            (OrbitalTerm::ApproxOrbital, PotentialKind::EckartCore { lambda, .. }) => lambda,
            _ => 0.0,
        }
    }

    /// Profile with the potential strength and kappa sign flipped, matching
    /// the negative-energy map on parameters.
    pub fn charge_conjugate(&self) -> Self {
        let kind = match self.kind {
            PotentialKind::Hulthen { v0, lambda } => PotentialKind::Hulthen { v0: -v0, lambda },
            PotentialKind::EckartCore { v0, lambda } => {
                PotentialKind::EckartCore { v0: -v0, lambda }
            }
            PotentialKind::Coulomb { strength } => PotentialKind::Coulomb {
                strength: -strength,
            },
        };
        Self {
            kind,
            orbital: self.orbital,
        }
    }
}

/// U_eff(r; eps) = (gamma/mu) [ (gamma/mu) V^2 - V' ] + 2 eps V (top sign).
/// The full radial operator is -d^2/dr^2 + U_eff with eigenvalue eps^2 - m^2.
pub fn effective_potential(
    profile: &PotentialProfile,
    derived: &DerivedParams,
    eps: f64,
    r: f64,
) -> f64 {
    let g = derived.gamma / derived.mu;
    let v = profile.v(r);
    g * (g * v * v - profile.v_prime(r)) + 2.0 * eps * v
}

/// Tolerance below which mC + eps counts as a validity violation of the
/// component relation.
const COMPONENT_DENOM_TOL: f64 = 1e-12;

/// Lower component from the upper one (top sign):
/// phi- = [ d/dr + (gamma/mu) V - (mu/kappa) m ] phi+ / (mC + eps).
pub fn lower_from_upper<'a>(
    upper: &'a dyn Fn(f64) -> f64,
    upper_deriv: &'a dyn Fn(f64) -> f64,
    derived: &DerivedParams,
    params: &ProblemParams,
    eps: f64,
    profile: &'a PotentialProfile,
) -> Result<impl Fn(f64) -> f64 + 'a> {
    let denom = params.mass * derived.cos_theta + eps;
    if denom.abs() < COMPONENT_DENOM_TOL * params.mass {
        return Err(Error::ValidityViolation {
            eps,
            neg_mc: -params.mass * derived.cos_theta,
        });
    }
    let g_over_mu = derived.gamma / derived.mu;
    let s_m = derived.sin_theta * params.mass;
    Ok(move |r: f64| (upper_deriv(r) + (g_over_mu * profile.v(r) - s_m) * upper(r)) / denom)
}

/// Basis tag of a sampled spinor pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// (phi+, phi-), the rotated frame the closed forms live in.
    Rotated,
    /// (psi+, psi-), the original radial Dirac components.
    Original,
}

/// Two-component radial spinor sampled on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorPair {
    pub r: Vec<f64>,
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    pub basis: Basis,
}

impl SpinorPair {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Discrete 2-norm at a grid point.
    pub fn magnitude_at(&self, i: usize) -> f64 {
        self.upper[i].hypot(self.lower[i])
    }
}

/// Rotation back to the original basis:
/// psi+ = cos(theta/2) phi+ - sin(theta/2) phi-,
/// psi- = sin(theta/2) phi+ + cos(theta/2) phi-.
pub fn rotate_to_original(pair: &SpinorPair, derived: &DerivedParams) -> Result<SpinorPair> {
    if pair.basis != Basis::Rotated {
        return Err(Error::BasisMismatch);
    }
    let (s, c) = (0.5 * derived.theta).sin_cos();
    let upper = pair
        .upper
        .iter()
        .zip(&pair.lower)
        .map(|(&u, &l)| c * u - s * l)
        .collect();
    let lower = pair
        .upper
        .iter()
        .zip(&pair.lower)
        .map(|(&u, &l)| s * u + c * l)
        .collect();
    Ok(SpinorPair {
        r: pair.r.clone(),
        upper,
        lower,
        basis: Basis::Original,
    })
}

/// Forward rotation (original -> rotated); inverse of [`rotate_to_original`].
pub fn rotate_to_rotated(pair: &SpinorPair, derived: &DerivedParams) -> Result<SpinorPair> {
    if pair.basis != Basis::Original {
        return Err(Error::BasisMismatch);
    }
    let (s, c) = (0.5 * derived.theta).sin_cos();
    let upper = pair
        .upper
        .iter()
        .zip(&pair.lower)
        .map(|(&u, &l)| c * u + s * l)
        .collect();
    let lower = pair
        .upper
        .iter()
        .zip(&pair.lower)
        .map(|(&u, &l)| -s * u + c * l)
        .collect();
    Ok(SpinorPair {
        r: pair.r.clone(),
        upper,
        lower,
        basis: Basis::Rotated,
    })
}

/// Residual of the rotated first-order system on a uniform grid, using
/// central stencils of the requested order (2 or 4) for the derivatives.
///
/// Returns the maximum over interior points of the larger row residual,
/// normalized by (m + |eps| + |V|) times the local spinor magnitude. Exact
/// solution pairs sit at the stencil's discretization floor.
pub fn first_order_residual(
    pair: &SpinorPair,
    params: &ProblemParams,
    derived: &DerivedParams,
    eps: f64,
    profile: &PotentialProfile,
    stencil_order: u32,
) -> Result<f64> {
    if pair.basis != Basis::Rotated {
        return Err(Error::BasisMismatch);
    }
    let n = pair.len();
    let margin = if stencil_order >= 4 { 2 } else { 1 };
    if n < 2 * margin + 1 {
        return Err(Error::EmptyGrid);
    }
    let h = pair.r[1] - pair.r[0];
    let deriv = |f: &[f64], i: usize| -> f64 {
        if stencil_order >= 4 {
            (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h)
        } else {
            (f[i + 1] - f[i - 1]) / (2.0 * h)
        }
    };
    let m = params.mass;
    let mc = m * derived.cos_theta;
    let g_over_mu = derived.gamma / derived.mu;
    let s_m = derived.sin_theta * m;
    let mut worst: f64 = 0.0;
    for i in margin..n - margin {
        let r = pair.r[i];
        let v = profile.v(r);
        let off = g_over_mu * v - s_m;
        let (fp, fm) = (pair.upper[i], pair.lower[i]);
        let r1 = (mc + 2.0 * v - eps) * fp + off * fm - deriv(&pair.lower, i);
        let r2 = off * fp + deriv(&pair.upper, i) - (mc + eps) * fm;
        let scale = (m + eps.abs() + v.abs()) * fp.hypot(fm);
        if scale > 0.0 {
            worst = worst.max(r1.abs().max(r2.abs()) / scale);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::linspace;
    use crate::model::derive;
    use approx::assert_relative_eq;

    fn sample_pair(basis: Basis) -> SpinorPair {
        let r = linspace(0.5, 5.0, 64);
        let upper = r.iter().map(|&x| (-x).exp() * x).collect();
        let lower = r.iter().map(|&x| 0.3 * (-x).exp()).collect();
        SpinorPair {
            r,
            upper,
            lower,
            basis,
        }
    }

    #[test]
    fn hulthen_profile_matches_singularity() {
        let p = ProblemParams::new(1.0, 0.2, -0.15, -1).unwrap();
        let prof = PotentialProfile::hulthen(&p, OrbitalTerm::ApproxOrbital);
        // r V(r) -> mu as r -> 0
        let r = 1e-9 / p.lambda;
        assert_relative_eq!(r * prof.v(r), p.mu(), max_relative = 1e-6);
        // far field decays
        assert!(prof.v(200.0).abs() < 1e-15);
    }

    #[test]
    fn eckart_profile_threshold_and_singularity() {
        let p = ProblemParams::new(1.0, 0.5, -0.25, 1).unwrap();
        let prof = PotentialProfile::eckart(&p, OrbitalTerm::ApproxOrbital);
        let r = 1e-9 / p.lambda;
        assert_relative_eq!(r * prof.v(r), p.mu(), max_relative = 1e-6);
        assert_relative_eq!(prof.v(1e4), p.v0, max_relative = 1e-12);
        assert_eq!(prof.v_at_infinity(), p.v0);
        assert_eq!(prof.w_at_infinity(), p.lambda);
    }

    #[test]
    fn effective_potential_decays_for_hulthen() {
        let p = ProblemParams::new(1.0, 0.2, -0.15, -1).unwrap();
        let d = derive(&p).unwrap();
        let prof = PotentialProfile::hulthen(&p, OrbitalTerm::ApproxOrbital);
        let u = effective_potential(&prof, &d, 0.9, 400.0);
        assert!(u.abs() < 1e-20, "u = {u}");
    }

    #[test]
    fn effective_potential_small_r_barrier() {
        // r^2 U_eff -> gamma (gamma + 1) for both potentials
        for make in [PotentialProfile::hulthen, PotentialProfile::eckart] {
            let p = ProblemParams::new(1.0, 0.2, -0.15, -1).unwrap();
            let d = derive(&p).unwrap();
            let prof = make(&p, OrbitalTerm::ApproxOrbital);
            let target = d.gamma * (d.gamma + 1.0);
            // Richardson over r = 1e-4/lam, 1e-5/lam (error is O(r))
            let f = |r: f64| r * r * effective_potential(&prof, &d, 0.9, r);
            let f1 = f(1e-4 / p.lambda);
            let f2 = f(1e-5 / p.lambda);
            let extrap = f2 + (f2 - f1) / 9.0;
            assert_relative_eq!(extrap, target, max_relative = 1e-4);
        }
    }

    #[test]
    fn effective_potential_eckart_independent_expression() {
        // independent hand-coded formula with V = V0/tanh, V' = -lam V0/sinh^2
        let p = ProblemParams::new(1.0, 0.5, -0.25, 1).unwrap();
        let d = derive(&p).unwrap();
        let prof = PotentialProfile::eckart(&p, OrbitalTerm::ApproxOrbital);
        let (eps, r) = (0.9, 2.0);
        let v = p.v0 / (p.lambda * r).tanh();
        let vp = -p.lambda * p.v0 / (p.lambda * r).sinh().powi(2);
        let g = (p.kappa as f64 / d.mu) * d.cos_theta;
        let expect = g * (g * v * v - vp) + 2.0 * eps * v;
        assert_relative_eq!(
            effective_potential(&prof, &d, eps, r),
            expect,
            max_relative = 1e-13
        );
    }

    #[test]
    fn lower_from_upper_is_linear() {
        let p = ProblemParams::new(1.0, 0.2, -0.15, -1).unwrap();
        let d = derive(&p).unwrap();
        let prof = PotentialProfile::hulthen(&p, OrbitalTerm::ApproxOrbital);
        let zero = |_: f64| 0.0;
        let f = lower_from_upper(&zero, &zero, &d, &p, 0.8, &prof).unwrap();
        assert_eq!(f(1.3), 0.0);

        let u = |r: f64| (-r).exp();
        let du = |r: f64| -(-r).exp();
        let u3 = |r: f64| 3.0 * (-r).exp();
        let du3 = |r: f64| -3.0 * (-r).exp();
        let f1 = lower_from_upper(&u, &du, &d, &p, 0.8, &prof).unwrap();
        let f3 = lower_from_upper(&u3, &du3, &d, &p, 0.8, &prof).unwrap();
        assert_relative_eq!(f3(0.9), 3.0 * f1(0.9), max_relative = 1e-14);
    }

    #[test]
    fn lower_from_upper_validity_violation() {
        let p = ProblemParams::new(1.0, 0.2, -0.15, -1).unwrap();
        let d = derive(&p).unwrap();
        let prof = PotentialProfile::hulthen(&p, OrbitalTerm::ApproxOrbital);
        let u = |_: f64| 1.0;
        let eps = -p.mass * d.cos_theta;
        assert!(matches!(
            lower_from_upper(&u, &u, &d, &p, eps, &prof).err(),
            Some(Error::ValidityViolation { .. })
        ));
    }

    #[test]
    fn rotation_round_trip_and_norm() {
        let p = ProblemParams::new(1.0, 0.4, 0.3, 2).unwrap();
        let d = derive(&p).unwrap();
        let pair = sample_pair(Basis::Rotated);
        let orig = rotate_to_original(&pair, &d).unwrap();
        assert_eq!(orig.basis, Basis::Original);
        // norm preserved pointwise
        for i in 0..pair.len() {
            assert_relative_eq!(
                orig.magnitude_at(i),
                pair.magnitude_at(i),
                max_relative = 1e-14
            );
        }
        let back = rotate_to_rotated(&orig, &d).unwrap();
        for i in 0..pair.len() {
            assert_relative_eq!(back.upper[i], pair.upper[i], max_relative = 1e-13);
            assert_relative_eq!(back.lower[i], pair.lower[i], max_relative = 1e-13);
        }
        // theta = 0 impossible here (v0 != 0), but mismatch errors must fire
        assert!(matches!(
            rotate_to_original(&orig, &d),
            Err(Error::BasisMismatch)
        ));
    }

    #[test]
    fn residual_rejects_bad_input() {
        let p = ProblemParams::new(1.0, 0.4, 0.3, 2).unwrap();
        let d = derive(&p).unwrap();
        let prof = PotentialProfile::hulthen(&p, OrbitalTerm::ApproxOrbital);
        let pair = sample_pair(Basis::Original);
        assert!(matches!(
            first_order_residual(&pair, &p, &d, 0.5, &prof, 4),
            Err(Error::BasisMismatch)
        ));
        let tiny = SpinorPair {
            r: vec![1.0, 2.0],
            upper: vec![0.1, 0.2],
            lower: vec![0.0, 0.1],
            basis: Basis::Rotated,
        };
        assert!(matches!(
            first_order_residual(&tiny, &p, &d, 0.5, &prof, 4),
            Err(Error::EmptyGrid)
        ));
    }

    #[test]
    fn residual_is_large_for_non_solutions() {
        let p = ProblemParams::new(1.0, 0.2, -0.15, -1).unwrap();
        let d = derive(&p).unwrap();
        let prof = PotentialProfile::hulthen(&p, OrbitalTerm::ApproxOrbital);
        let pair = sample_pair(Basis::Rotated);
        let res = first_order_residual(&pair, &p, &d, 0.8, &prof, 4).unwrap();
        assert!(
            res > 1e-2,
            "random smooth pair must not look like a solution, res = {res}"
        );
    }
}
