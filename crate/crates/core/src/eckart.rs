//! Closed-form solution of the Dirac-Eckart problem (the 1/r-singular
//! coth-shaped vector potential): exponents, spectrum, level count,
//! wavefunctions, negative-energy map and nonrelativistic limit.
//!
//! With x = coth(lambda r) the upper rotated component of a bound state is
//!
//! ```text
//! phi+_d(r) = A (x+1)^{-alpha} (x-1)^{beta}
//!             2F1(-d, 2(beta - alpha) + d + 1; 2 beta + 1; (1-x)/2),
//! ```
//!
//! where the exponents at energy eps are
//!
//! ```text
//! alpha = (1/2) sqrt(kappa^2 + [m^2 - (eps + V0)^2]/lambda^2),
//! beta  = (1/2) sqrt(kappa^2 + [m^2 - (eps - V0)^2]/lambda^2),
//! ```
//!
//! and boundary conditions require alpha > beta > 0. Termination quantizes
//! alpha - beta = q = n + |gamma|, giving
//!
//! ```text
//! eps_n = lambda [1 + mu^2 / q^2]^{-1/2} sqrt((m/lambda)^2 - n(n + 2|gamma|)).
//! ```
//!
//! As with the Hulthen case the formula comes from squaring, so each value
//! is kept only if the positive-root exponents really satisfy
//! alpha - beta = q; `level_is_valid` checks the equivalent sign condition
//! -eps mu / lambda > q^2.

use crate::error::Error;
use crate::grid::{geomspace, linspace, trapezoid};
use crate::model::{derive, is_bound_energy, Branch, ProblemParams};
use crate::reduction::{
    lower_from_upper, rotate_to_original, Basis, OrbitalTerm, PotentialProfile, SpinorPair,
};
use crate::specfun::{hyp2f1_poly, hyp2f1_poly_deriv};
use crate::Result;

/// One bound level of the Dirac-Eckart spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EckartLevel {
    /// Formula index n.
    pub n: u32,
    pub epsilon: f64,
    /// Exponents of the ansatz evaluated at this level's energy.
    pub alpha_n: f64,
    pub beta_n: f64,
    /// Polynomial degree of the upper component (n for kappa < 0, n - 1 for
    /// kappa > 0).
    pub spinor_index: u32,
    pub branch: Branch,
    pub critical: bool,
}

/// Ansatz exponents and hypergeometric parameters at a given energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EckartAnsatz {
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// The positive-root exponents (alpha, beta) at energy `eps`.
pub fn eckart_exponents(params: &ProblemParams, eps: f64) -> Result<(f64, f64)> {
    let k2 = (params.kappa as f64) * (params.kappa as f64);
    let l2 = params.lambda * params.lambda;
    let m2 = params.mass * params.mass;
    let arg_a = k2 + (m2 - (eps + params.v0) * (eps + params.v0)) / l2;
    let arg_b = k2 + (m2 - (eps - params.v0) * (eps - params.v0)) / l2;
    if arg_a < 0.0 || arg_b < 0.0 {
        return Err(Error::ComplexExponent { eps });
    }
    Ok((0.5 * arg_a.sqrt(), 0.5 * arg_b.sqrt()))
}

/// Exponents plus the terminating-series parameters at degree `deg`.
pub fn eckart_ansatz(params: &ProblemParams, eps: f64, deg: u32) -> Result<EckartAnsatz> {
    let (alpha, beta) = eckart_exponents(params, eps)?;
    Ok(EckartAnsatz {
        alpha,
        beta,
        a: -(deg as f64),
        b: 2.0 * (beta - alpha) + deg as f64 + 1.0,
        c: 2.0 * beta + 1.0,
    })
}

/// Closed-form energy at formula index n; n = 0 evaluates to m*C exactly.
pub fn eckart_epsilon(params: &ProblemParams, n: u32) -> Result<f64> {
    let d = derive(params)?;
    if n == 0 {
        return Ok(params.mass * d.cos_theta);
    }
    let g = d.gamma.abs();
    let q = n as f64 + g;
    let u = q * q - d.gamma * d.gamma;
    let m_over_lam = params.mass / params.lambda;
    let disc = m_over_lam * m_over_lam - u;
    if disc < 0.0 {
        return Err(Error::IndexBeyondSpectrum { n });
    }
    Ok(params.lambda * disc.sqrt() / (1.0 + (d.mu / q) * (d.mu / q)).sqrt())
}

/// True-root check: the squared quantization admits a spurious branch with
/// alpha + beta = q instead of alpha - beta = q; the signed parametrization
/// beta = (-eps mu/(lambda q) - q)/2 must be positive.
pub fn eckart_level_is_valid(params: &ProblemParams, n: u32, eps: f64) -> bool {
    let Ok(d) = derive(params) else { return false };
    if !is_bound_energy(eps, params.mass) {
        return false;
    }
    let q = n as f64 + d.gamma.abs();
    -eps * d.mu / params.lambda - q * q >= -1e-12 * params.mass
}

/// Largest formula index keeping the closed form real:
/// floor of N = |gamma| [ -1 + sqrt(1 + (m / lambda gamma)^2) ].
pub fn eckart_nmax(params: &ProblemParams) -> Result<u32> {
    let d = derive(params)?;
    let g = d.gamma.abs();
    if g == 0.0 {
        return Ok(0);
    }
    let t = params.mass / (params.lambda * g);
    let n = g * (-1.0 + (1.0 + t * t).sqrt());
    Ok(n.max(0.0).floor() as u32)
}

/// Raw closed-form sequence before the termination filter.
pub fn eckart_raw_sequence(params: &ProblemParams) -> Result<Vec<f64>> {
    let nmax = eckart_nmax(params)?;
    (0..=nmax).map(|n| eckart_epsilon(params, n)).collect()
}

fn positive_levels(params: &ProblemParams) -> Result<Vec<EckartLevel>> {
    let nmax = eckart_nmax(params)?;
    let critical = params.is_critical();
    let mut out = Vec::new();
    for n in 0..=nmax {
        let eps = eckart_epsilon(params, n)?;
        if !eckart_level_is_valid(params, n, eps) {
            continue;
        }
        if params.kappa > 0 && n == 0 {
            continue;
        }
        let (alpha_n, beta_n) = eckart_exponents(params, eps)?;
        let spinor_index = if params.kappa > 0 { n - 1 } else { n };
        // alpha - beta = n + |gamma| exceeds the polynomial degree, which is
        // what keeps phi+ -> 0 at the origin
        debug_assert!(alpha_n - beta_n > spinor_index as f64);
        out.push(EckartLevel {
            n,
            epsilon: eps,
            alpha_n,
            beta_n,
            spinor_index,
            branch: Branch::Positive,
            critical: critical && eps == 0.0,
        });
    }
    Ok(out)
}

/// Bound spectrum for the requested branch; the negative branch comes from
/// the map (eps, kappa, V0) -> (-eps, -kappa, -V0).
pub fn eckart_spectrum(params: &ProblemParams, branch: Branch) -> Result<Vec<EckartLevel>> {
    match branch {
        Branch::Positive => positive_levels(params),
        Branch::Negative => {
            let mapped = params.charge_conjugate();
            let mut levels = positive_levels(&mapped)?;
            for lvl in &mut levels {
                lvl.epsilon = -lvl.epsilon;
                lvl.branch = Branch::Negative;
            }
            levels.sort_by(|a, b| a.epsilon.total_cmp(&b.epsilon));
            Ok(levels)
        }
    }
}

/// x - 1, x + 1 and the series argument (1-x)/2 for x = coth(lambda r),
/// in cancellation-free forms.
fn coth_parts(lambda: f64, r: f64) -> (f64, f64, f64) {
    let xm1 = 2.0 / (2.0 * lambda * r).exp_m1();
    (xm1, xm1 + 2.0, -0.5 * xm1)
}

/// Unnormalized upper rotated component phi+ at radius r (positive branch).
pub fn eckart_upper(params: &ProblemParams, level: &EckartLevel, r: f64) -> Result<f64> {
    let ans = eckart_ansatz(params, level.epsilon, level.spinor_index)?;
    let (xm1, xp1, u) = coth_parts(params.lambda, r);
    let f = hyp2f1_poly(level.spinor_index, ans.b, ans.c, u)?;
    Ok(xp1.powf(-ans.alpha) * xm1.powf(ans.beta) * f)
}

/// Analytic d(phi+)/dr via the chain rule through x = coth(lambda r).
pub fn eckart_upper_deriv(params: &ProblemParams, level: &EckartLevel, r: f64) -> Result<f64> {
    let ans = eckart_ansatz(params, level.epsilon, level.spinor_index)?;
    let (xm1, xp1, u) = coth_parts(params.lambda, r);
    let f = hyp2f1_poly(level.spinor_index, ans.b, ans.c, u)?;
    let fp = hyp2f1_poly_deriv(level.spinor_index, ans.b, ans.c, u)?;
    // dx/dr = -lambda (x^2 - 1) = -lambda (x-1)(x+1), kept factored to avoid
    // cancellation at large r where x -> 1
    let dxdr = -params.lambda * xm1 * xp1;
    let dfdx = -ans.alpha * xp1.powf(-ans.alpha - 1.0) * xm1.powf(ans.beta) * f
        + ans.beta * xp1.powf(-ans.alpha) * xm1.powf(ans.beta - 1.0) * f
        - 0.5 * xp1.powf(-ans.alpha) * xm1.powf(ans.beta) * fp;
    Ok(dfdx * dxdr)
}

pub use crate::hulthen::NormalizedPair;

/// Absolute tolerance on the normalization integral.
const NORM_TOL: f64 = 1e-10;
const NORM_POINTS: usize = 1 << 18;

/// Builds the normalized (phi, psi) pairs of a positive-branch level,
/// sampled on `grid`.
pub fn eckart_pair(
    params: &ProblemParams,
    level: &EckartLevel,
    grid: &[f64],
) -> Result<NormalizedPair> {
    if grid.len() < 2 {
        return Err(Error::EmptyGrid);
    }
    let d = derive(params)?;
    let upper = |r: f64| eckart_upper(params, level, r).unwrap_or(f64::NAN);
    let upper_deriv = |r: f64| eckart_upper_deriv(params, level, r).unwrap_or(f64::NAN);
    let profile = PotentialProfile::eckart(params, OrbitalTerm::ApproxOrbital);
    let lower = lower_from_upper(&upper, &upper_deriv, &d, params, level.epsilon, &profile)?;

    let decay = 2.0 * params.lambda * level.beta_n;
    let r_max = 40.0 / decay;
    let quad = linspace(0.0, r_max, NORM_POINTS + 1);
    let mut density = vec![0.0; quad.len()];
    for (i, &r) in quad.iter().enumerate().skip(1) {
        let u = upper(r);
        let l = lower(r);
        density[i] = u * u + l * l;
    }
    let integral = trapezoid(&quad, &density);
    let tail = density[quad.len() - 1] / (2.0 * decay);
    if tail > NORM_TOL {
        return Err(Error::QuadratureFailure {
            tail,
            tol: NORM_TOL,
        });
    }
    let norm = 1.0 / (integral + tail).sqrt();

    let upper_vals: Vec<f64> = grid
        .iter()
        .map(|&r| if r > 0.0 { norm * upper(r) } else { 0.0 })
        .collect();
    let lower_vals: Vec<f64> = grid
        .iter()
        .map(|&r| if r > 0.0 { norm * lower(r) } else { 0.0 })
        .collect();
    let rotated = SpinorPair {
        r: grid.to_vec(),
        upper: upper_vals,
        lower: lower_vals,
        basis: Basis::Rotated,
    };
    let original = rotate_to_original(&rotated, &d)?;
    Ok(NormalizedPair {
        rotated,
        original,
        normalization: norm,
    })
}

/// Interior sign changes of phi+ on (0, inf).
pub fn eckart_node_count(params: &ProblemParams, level: &EckartLevel) -> Result<usize> {
    let r_hi = 35.0 / (2.0 * params.lambda * level.beta_n);
    let grid = geomspace(1e-6 / params.lambda, r_hi, 40_000);
    let mut nodes = 0;
    let mut prev = 0.0f64;
    for &r in &grid {
        let v = eckart_upper(params, level, r)?;
        if v != 0.0 {
            if prev != 0.0 && v.signum() != prev.signum() {
                nodes += 1;
            }
            prev = v;
        }
    }
    Ok(nodes)
}

/// Nonrelativistic spectrum in atomic units (hbar = m = 1):
/// E = -(lambda^2/2) [ ((V0/lambda^2)/(n + l + 1))^2 + (n + l + 1)^2 - l^2 ].
pub fn eckart_nonrel(v0: f64, lambda: f64, n: u32, ell: u32) -> f64 {
    let nu = (n + ell + 1) as f64;
    let l2 = (ell as f64) * (ell as f64);
    let t = v0 / (lambda * lambda) / nu;
    -0.5 * lambda * lambda * (t * t + nu * nu - l2)
}
