//! Closed-form solution of the Dirac-Hulthen problem: spectrum, level
//! count, spinor wavefunctions, negative-energy map and nonrelativistic
//! limit.
//!
//! With x = e^{-lambda r} the upper rotated component of a bound state is
//!
//! ```text
//! phi+_d(r) = A x^alpha (1 - x)^beta P_d^(2 alpha, 2 beta - 1)(1 - 2x),
//! ```
//!
//! where d is the polynomial degree, alpha = sqrt(m^2 - eps^2)/lambda and
//! beta = -gamma (kappa < 0) or gamma + 1 (kappa > 0). Termination of the
//! underlying hypergeometric series quantizes the energy; writing
//! q = n + |gamma| and u = n(n + 2|gamma|) the closed form reads
//!
//! ```text
//! eps_n = (lambda/2) [ -mu u + q sqrt((2m/lambda)^2 (u + kappa^2) - u^2) ]
//!         / (mu^2 + q^2).
//! ```
//!
//! The formula index n counts q-steps: for kappa < 0 the degree equals n,
//! for kappa > 0 the degree is n - 1 and the n = 0 entry is not attached to
//! any spinor. Because eps_n comes from squaring the termination condition,
//! each value must also satisfy the unsquared condition before it is a
//! genuine bound level; `level_is_valid` performs that check.

use crate::error::Error;
use crate::grid::{geomspace, linspace, trapezoid};
use crate::model::{bound_condition_holds, derive, is_bound_energy, Branch, ProblemParams};
use crate::reduction::{
    lower_from_upper, rotate_to_original, Basis, OrbitalTerm, PotentialProfile, SpinorPair,
};
use crate::specfun::{jacobi_p, jacobi_p_deriv};
use crate::Result;

/// One bound level of the Dirac-Hulthen spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HulthenLevel {
    /// Formula index n (the q = n + |gamma| counter).
    pub n: u32,
    /// Energy eigenvalue.
    pub epsilon: f64,
    /// alpha_n = sqrt(m^2 - eps_n^2)/lambda, the decay exponent.
    pub alpha_n: f64,
    /// Index of the spinor this energy belongs to; equals the polynomial
    /// degree of the upper component (n for kappa < 0, n - 1 for kappa > 0).
    pub spinor_index: u32,
    pub branch: Branch,
    /// Set when cos(theta) = 0 (|mu| = |kappa|): the level sits at zero
    /// energy and the component relation degenerates.
    pub critical: bool,
}

/// Ansatz exponents and hypergeometric parameters at a given energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HulthenAnsatz {
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Exponents and 2F1 parameters of the bound-state ansatz at energy `eps`.
pub fn hulthen_ansatz(params: &ProblemParams, eps: f64) -> Result<HulthenAnsatz> {
    let d = derive(params)?;
    if !is_bound_energy(eps, params.mass) {
        return Err(Error::ComplexExponent { eps });
    }
    let alpha = (params.mass * params.mass - eps * eps).sqrt() / params.lambda;
    let beta = if params.kappa > 0 {
        d.gamma + 1.0
    } else {
        -d.gamma
    };
    let arg = alpha * alpha + d.gamma * d.gamma - 2.0 * eps * d.mu / params.lambda;
    if arg < 0.0 {
        return Err(Error::ComplexExponent { eps });
    }
    let root = arg.sqrt();
    Ok(HulthenAnsatz {
        alpha,
        beta,
        a: alpha + beta - root,
        b: alpha + beta + root,
        c: 2.0 * alpha + 1.0,
    })
}

/// Closed-form energy at formula index n. n = 0 always evaluates to m*C.
pub fn hulthen_epsilon(params: &ProblemParams, n: u32) -> Result<f64> {
    let d = derive(params)?;
    if n == 0 {
        return Ok(params.mass * d.cos_theta);
    }
    let g = d.gamma.abs();
    let q = n as f64 + g;
    let u = q * q - d.gamma * d.gamma; // n (n + 2|gamma|)
    let two_m_over_lam = 2.0 * params.mass / params.lambda;
    let disc = two_m_over_lam * two_m_over_lam * (u + (params.kappa as f64).powi(2)) - u * u;
    if disc < 0.0 {
        return Err(Error::IndexBeyondSpectrum { n });
    }
    Ok(0.5 * params.lambda * (-d.mu * u + q * disc.sqrt()) / (d.mu * d.mu + q * q))
}

/// Whether the closed-form value at index n solves the unsquared
/// termination condition, i.e. is a genuine bound level rather than an
/// artifact of squaring. Requires |eps| < m and
/// gamma^2 - q^2 - 2 eps mu / lambda >= 0 (which equals 2 q alpha >= 0 at a
/// true root and -2 q alpha < 0 at a spurious one).
pub fn hulthen_level_is_valid(params: &ProblemParams, n: u32, eps: f64) -> bool {
    let Ok(d) = derive(params) else { return false };
    if !is_bound_energy(eps, params.mass) {
        return false;
    }
    let q = n as f64 + d.gamma.abs();
    d.gamma * d.gamma - q * q - 2.0 * eps * d.mu / params.lambda >= -1e-12 * params.mass
}

/// Largest formula index with a real closed-form energy, as the floor of
///
/// ```text
/// N = |gamma| { -1 + sqrt(1 + 2 (m / lambda gamma)^2 [1 + sqrt(1 - (lambda kappa / m)^2)]) }.
/// ```
///
/// For lambda |kappa| > m the inner root is imaginary and the level count is
/// reported as absent ([`Error::NoBoundLevels`]) rather than guessed.
pub fn hulthen_nmax(params: &ProblemParams) -> Result<u32> {
    let d = derive(params)?;
    let m = params.mass;
    let lam_kap = params.lambda * (params.kappa as f64).abs();
    if lam_kap > m {
        return Err(Error::NoBoundLevels { lam_kap, mass: m });
    }
    let g = d.gamma.abs();
    if g == 0.0 {
        // critical coupling |mu| = |kappa|: only the zero-energy entry
        return Ok(0);
    }
    let inner = (1.0 - (lam_kap / m) * (lam_kap / m)).max(0.0).sqrt();
    let t = m / (params.lambda * g);
    let n = g * (-1.0 + (1.0 + 2.0 * t * t * (1.0 + inner)).sqrt());
    Ok(n.max(0.0).floor() as u32)
}

/// Largest index at which the energy formula is still real, found by
/// scanning its discriminant.
fn reality_edge(params: &ProblemParams) -> Result<u32> {
    let mut n = 0;
    while n < 100_000 {
        match hulthen_epsilon(params, n + 1) {
            Ok(_) => n += 1,
            Err(Error::IndexBeyondSpectrum { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(n)
}

/// The raw closed-form sequence eps_0 .. eps_nmax, before the termination
/// filter. Exposed for testing; the physical spectrum applies the filter and
/// the spinor-association rule.
pub fn hulthen_raw_sequence(params: &ProblemParams) -> Result<Vec<f64>> {
    let nmax = hulthen_nmax(params)?;
    (0..=nmax).map(|n| hulthen_epsilon(params, n)).collect()
}

fn positive_levels(params: &ProblemParams) -> Result<Vec<HulthenLevel>> {
    // when the closed-form count is undefined (strong screening,
    // lambda |kappa| > m) the termination filter still decides level by
    // level, so candidates run to the reality edge of the energy formula
    let nmax = match hulthen_nmax(params) {
        Ok(n) => n,
        Err(Error::NoBoundLevels { .. }) => reality_edge(params)?,
        Err(e) => return Err(e),
    };
    let critical = params.is_critical();
    let mut out = Vec::new();
    for n in 0..=nmax {
        let eps = hulthen_epsilon(params, n)?;
        if !hulthen_level_is_valid(params, n, eps) {
            continue;
        }
        // kappa > 0: the n = 0 entry is not attached to any spinor
        if params.kappa > 0 && n == 0 {
            continue;
        }
        debug_assert!(bound_condition_holds(eps, params));
        let alpha_n = (params.mass * params.mass - eps * eps).max(0.0).sqrt() / params.lambda;
        out.push(HulthenLevel {
            n,
            epsilon: eps,
            alpha_n,
            spinor_index: if params.kappa > 0 { n - 1 } else { n },
            branch: Branch::Positive,
            critical: critical && eps == 0.0,
        });
    }
    Ok(out)
}

/// Bound spectrum for the requested branch. The negative branch is the
/// image of the positive spectrum of (m, lambda, -V0, -kappa) under
/// eps -> -eps.
pub fn hulthen_spectrum(params: &ProblemParams, branch: Branch) -> Result<Vec<HulthenLevel>> {
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

fn level_shape(params: &ProblemParams, level: &HulthenLevel) -> Result<(f64, f64, u32)> {
    let d = derive(params)?;
    let beta = if params.kappa > 0 {
        d.gamma + 1.0
    } else {
        -d.gamma
    };
    Ok((level.alpha_n, beta, level.spinor_index))
}

/// Unnormalized upper rotated component phi+ at radius r (positive branch).
pub fn hulthen_upper(params: &ProblemParams, level: &HulthenLevel, r: f64) -> Result<f64> {
    let (alpha, beta, deg) = level_shape(params, level)?;
    let x = (-params.lambda * r).exp();
    let one_minus_x = -(-params.lambda * r).exp_m1();
    let p = jacobi_p(deg, 2.0 * alpha, 2.0 * beta - 1.0, 1.0 - 2.0 * x)?;
    Ok(x.powf(alpha) * one_minus_x.powf(beta) * p)
}

/// Analytic d(phi+)/dr via the chain rule through x = e^{-lambda r}.
pub fn hulthen_upper_deriv(params: &ProblemParams, level: &HulthenLevel, r: f64) -> Result<f64> {
    let (alpha, beta, deg) = level_shape(params, level)?;
    let lam = params.lambda;
    let x = (-lam * r).exp();
    let one_minus_x = -(-lam * r).exp_m1();
    let (a, b) = (2.0 * alpha, 2.0 * beta - 1.0);
    let p = jacobi_p(deg, a, b, 1.0 - 2.0 * x)?;
    let dp = jacobi_p_deriv(deg, a, b, 1.0 - 2.0 * x)?;
    // d/dx [x^alpha (1-x)^beta P(1-2x)]
    let ddx = alpha * x.powf(alpha - 1.0) * one_minus_x.powf(beta) * p
        - beta * x.powf(alpha) * one_minus_x.powf(beta - 1.0) * p
        - 2.0 * x.powf(alpha) * one_minus_x.powf(beta) * dp;
    Ok(-lam * x * ddx)
}

/// Normalized spinor pair of a positive-branch level, sampled on `grid`
/// (which must be uniform for the downstream residual stencils). Returns the
/// pair in the original basis together with the rotated pair and the
/// normalization constant A such that the integral of |psi+|^2 + |psi-|^2
/// over (0, inf) equals one.
pub struct NormalizedPair {
    pub rotated: SpinorPair,
    pub original: SpinorPair,
    pub normalization: f64,
}

/// Absolute tolerance on the normalization integral.
const NORM_TOL: f64 = 1e-10;
/// Points for the internal normalization quadrature.
const NORM_POINTS: usize = 1 << 18;

fn normalize_pair(
    params: &ProblemParams,
    eps: f64,
    decay: f64,
    upper: &dyn Fn(f64) -> f64,
    upper_deriv: &dyn Fn(f64) -> f64,
    profile: &PotentialProfile,
    grid: &[f64],
) -> Result<NormalizedPair> {
    if grid.len() < 2 {
        return Err(Error::EmptyGrid);
    }
    let d = derive(params)?;
    let lower = lower_from_upper(upper, upper_deriv, &d, params, eps, profile)?;

    // quadrature grid: tail truncated where the density has decayed by
    // e^{-80}; the analytic tail bound must stay below tolerance
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

    // both components vanish at the origin; evaluate the limit directly so
    // grids that include r = 0 stay finite
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

/// Builds the normalized (phi, psi) pairs of a positive-branch level.
pub fn hulthen_pair(
    params: &ProblemParams,
    level: &HulthenLevel,
    grid: &[f64],
) -> Result<NormalizedPair> {
    let upper = |r: f64| hulthen_upper(params, level, r).unwrap_or(f64::NAN);
    let upper_deriv = |r: f64| hulthen_upper_deriv(params, level, r).unwrap_or(f64::NAN);
    let profile = PotentialProfile::hulthen(params, OrbitalTerm::ApproxOrbital);
    normalize_pair(
        params,
        level.epsilon,
        params.lambda * level.alpha_n,
        &upper,
        &upper_deriv,
        &profile,
        grid,
    )
}

/// Interior sign changes of phi+ on (0, inf), counted on a dense log grid.
pub fn hulthen_node_count(params: &ProblemParams, level: &HulthenLevel) -> Result<usize> {
    let r_hi = 35.0 / (params.lambda * level.alpha_n);
    let grid = geomspace(1e-6 / params.lambda, r_hi, 40_000);
    let mut nodes = 0;
    let mut prev = 0.0f64;
    for &r in &grid {
        let v = hulthen_upper(params, level, r)?;
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
/// E = -(lambda^2/8) [ (2 V0/lambda^2 - l^2)/(n + l + 1) + (n + l + 1) ]^2.
pub fn hulthen_nonrel(v0: f64, lambda: f64, n: u32, ell: u32) -> f64 {
    let nu = (n + ell + 1) as f64;
    let l2 = (ell as f64) * (ell as f64);
    let t = (2.0 * v0 / (lambda * lambda) - l2) / nu + nu;
    -lambda * lambda / 8.0 * t * t
}
