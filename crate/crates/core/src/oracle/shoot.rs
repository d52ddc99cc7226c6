//! Phase-function shooting solver for the first-order radial Dirac system,
//! with either the exact kappa/r orbital term or the approximated
//! kappa W(r) one.
//!
//! The system
//!
//! ```text
//! psi+' = -kappa W~ psi+ + (m + eps - V) psi-
//! psi-' = (m - eps + V) psi+ + kappa W~ psi-
//! ```
//!
//! is integrated in the Pruefer angle theta = atan2(psi-, psi+), whose
//! scalar equation
//!
//! ```text
//! theta' = (m - eps + V) cos^2 - (m + eps - V) sin^2 + 2 kappa W~ sin cos
//! ```
//!
//! never overflows and carries the node count of psi+ for free (nodes are
//! crossings of theta through pi/2 mod pi). Outward integration starts from
//! the power-law behavior r^s, s = sqrt(kappa^2 - mu^2); inward integration
//! starts from the decaying asymptotic eigenvector. A bound energy makes the
//! two phases agree modulo pi at the matching radius, so the matching
//! determinant is sin(theta_out - theta_in).

use crate::error::Error;
use crate::model::ProblemParams;
use crate::oracle::OracleConfig;
use crate::reduction::PotentialProfile;
use crate::Result;

/// Dormand-Prince 5(4) coefficients for a scalar ODE.
const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive scalar integration of dy/dr = f(r, y) from (r0, y0) to r1
/// (either direction). `observe` is called after every accepted step with
/// the step interval and endpoint values, which the node counter uses.
fn dopri5<F, O>(f: &F, r0: f64, r1: f64, y0: f64, tol: f64, observe: &mut O) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
    O: FnMut(f64, f64, f64, f64),
{
    let span = r1 - r0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut r = r0;
    let mut y = y0;
    let mut h = dir * (span.abs() * 1e-3).min(0.1).max(span.abs() * 1e-12);
    let mut k = [0.0f64; 7];
    k[0] = f(r, y);
    for _ in 0..4_000_000usize {
        // arrived when the remaining span is at rounding level
        if (r1 - r) * dir <= 4.0 * f64::EPSILON * r1.abs().max(r.abs()) {
            return Ok(y);
        }
        if (r + h - r1) * dir > 0.0 {
            h = r1 - r;
        }
        for stage in 0..6 {
            let mut acc = 0.0;
            for j in 0..=stage {
                acc += A[stage][j] * k[j];
            }
            k[stage + 1] = f(r + C[stage] * h, y + h * acc);
        }
        let mut y5 = y;
        let mut y4 = y;
        for j in 0..7 {
            y5 += h * B5[j] * k[j];
            y4 += h * B4[j] * k[j];
        }
        let err = (y5 - y4).abs() / tol.max(1e-15);
        if err <= 1.0 {
            observe(r, y, r + h, y5);
            r += h;
            y = y5;
            k[0] = k[6]; // FSAL
            let grow = if err > 0.0 { 0.9 * err.powf(-0.2) } else { 5.0 };
            h *= grow.min(5.0);
        } else {
            h *= (0.9 * err.powf(-0.2)).max(0.1);
            k[0] = f(r, y);
        }
        if h.abs() < 1e-14 * r.abs().max(1e-10) {
            return Err(Error::StiffIntegration { r });
        }
    }
    Err(Error::StiffIntegration { r })
}

struct PhaseSystem<'a> {
    profile: &'a PotentialProfile,
    kappa: f64,
    mass: f64,
    eps: f64,
}

impl PhaseSystem<'_> {
    fn rhs(&self, r: f64, theta: f64) -> f64 {
        let v = self.profile.v(r);
        let w = self.kappa * self.profile.orbital_w(r);
        let (s, c) = theta.sin_cos();
        (self.mass - self.eps + v) * c * c - (self.mass + self.eps - v) * s * s + 2.0 * w * s * c
    }
}

/// Geometry of one shooting run: start, match and end radii plus the
/// boundary phases.
struct ShootSetup {
    r_min: f64,
    r_match: f64,
    r_max: f64,
    theta_origin: f64,
    theta_infinity: f64,
}

fn setup(
    profile: &PotentialProfile,
    params: &ProblemParams,
    eps: f64,
    config: &OracleConfig,
) -> Result<ShootSetup> {
    let m = params.mass;
    let kappa = params.kappa as f64;
    let mu = profile.mu();
    let s2 = kappa * kappa - mu * mu;
    if s2 <= 0.0 {
        return Err(Error::InitializationFailure {
            mu,
            kappa: params.kappa,
        });
    }
    let s = s2.sqrt();
    // decaying asymptotics: exponent sqrt(kappa^2 w_inf^2 + m^2 - (eps - v_inf)^2)
    let v_inf = profile.v_at_infinity();
    let w_inf = profile.w_at_infinity();
    let k2 = kappa * kappa * w_inf * w_inf + m * m - (eps - v_inf) * (eps - v_inf);
    if k2 <= 0.0 {
        return Err(Error::ComplexExponent { eps });
    }
    let k_dec = k2.sqrt();
    let scale = scale_length(profile, m);
    let r_min = config.r_min;
    let r_max = (30.0 / k_dec + 3.0 * scale).min(config.r_max);

    // outer edge of the classically allowed region of the second-order
    // reduction; the matching radius is its geometric mean with r_min
    let derived_gamma_over_mu = kappa / mu * (1.0 - (mu / kappa) * (mu / kappa)).sqrt();
    let u_eff = |r: f64| {
        let v = profile.v(r);
        derived_gamma_over_mu * (derived_gamma_over_mu * v * v - profile.v_prime(r)) + 2.0 * eps * v
    };
    let lam_target = eps * eps - m * m;
    let probe: Vec<f64> = (0..240)
        .map(|i| r_min * (r_max / r_min).powf(i as f64 / 239.0))
        .collect();
    let r_turn = probe
        .iter()
        .rev()
        .find(|&&r| u_eff(r) < lam_target)
        .copied()
        .unwrap_or(1.0 / k_dec);
    let r_match = (r_min * r_turn).sqrt().clamp(r_min * 2.0, r_max * 0.5);

    // power-law startup: (psi+, psi-) ~ r^s (1, -(kappa + s)/mu)
    let theta_origin = (-(kappa + s) / mu).atan2(1.0);
    // decaying eigenvector of the constant asymptotic system; p > 0 on the
    // whole admissible window, so this branch is smooth in eps (switching
    // representations mid-scan would flip the vector's sign and shift the
    // phase by pi)
    let (p, q) = (m + eps - v_inf, kappa * w_inf - k_dec);
    let theta_infinity = q.atan2(p);
    Ok(ShootSetup {
        r_min,
        r_match,
        r_max,
        theta_origin,
        theta_infinity,
    })
}

fn scale_length(profile: &PotentialProfile, mass: f64) -> f64 {
    match profile.kind {
        crate::reduction::PotentialKind::Hulthen { lambda, .. }
        | crate::reduction::PotentialKind::EckartCore { lambda, .. } => 1.0 / lambda,
        crate::reduction::PotentialKind::Coulomb { strength } => 1.0 / (mass * strength.abs()),
    }
}

/// Matching determinant sin(theta_out - theta_in) at the matching radius.
/// Bound energies are its zeros in eps.
pub fn dirac_shoot(
    profile: &PotentialProfile,
    params: &ProblemParams,
    eps: f64,
    config: &OracleConfig,
) -> Result<f64> {
    Ok(phase_mismatch(profile, params, eps, config)?.sin())
}

/// theta_out(r_match) - theta_in(r_match); multiples of pi are eigenvalues.
pub fn phase_mismatch(
    profile: &PotentialProfile,
    params: &ProblemParams,
    eps: f64,
    config: &OracleConfig,
) -> Result<f64> {
    let st = setup(profile, params, eps, config)?;
    let sys = PhaseSystem {
        profile,
        kappa: params.kappa as f64,
        mass: params.mass,
        eps,
    };
    let f = |r: f64, th: f64| sys.rhs(r, th);
    let tol = (config.eps_tol * 1e-2).min(1e-10);
    let mut sink = |_: f64, _: f64, _: f64, _: f64| {};
    let th_out = dopri5(&f, st.r_min, st.r_match, st.theta_origin, tol, &mut sink)?;
    let th_in = dopri5(&f, st.r_max, st.r_match, st.theta_infinity, tol, &mut sink)?;
    Ok(th_out - th_in)
}

/// Node count of psi+ for the eigenfunction at eps: crossings of the
/// outward phase through pi/2 mod pi, counted out to the matching radius,
/// plus the crossings of the inward phase beyond it.
fn node_count(
    profile: &PotentialProfile,
    params: &ProblemParams,
    eps: f64,
    config: &OracleConfig,
) -> Result<usize> {
    let st = setup(profile, params, eps, config)?;
    let sys = PhaseSystem {
        profile,
        kappa: params.kappa as f64,
        mass: params.mass,
        eps,
    };
    let f = |r: f64, th: f64| sys.rhs(r, th);
    let cell = |th: f64| ((th - std::f64::consts::FRAC_PI_2) / std::f64::consts::PI).floor();
    let mut crossings = 0usize;
    {
        let mut count = |_: f64, th_a: f64, _: f64, th_b: f64| {
            crossings += (cell(th_b) - cell(th_a)).abs() as usize;
        };
        dopri5(&f, st.r_min, st.r_match, st.theta_origin, 1e-9, &mut count)?;
    }
    {
        let mut count = |_: f64, th_a: f64, _: f64, th_b: f64| {
            crossings += (cell(th_b) - cell(th_a)).abs() as usize;
        };
        dopri5(
            &f,
            st.r_max,
            st.r_match,
            st.theta_infinity,
            1e-9,
            &mut count,
        )?;
    }
    Ok(crossings)
}

/// A shooting root with its node label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingRoot {
    pub energy: f64,
    pub nodes: usize,
}

/// All bound energies of the first-order system in (-m, m), located by
/// bracketing integer crossings of the phase mismatch over a clustered scan
/// grid and bisecting each.
pub fn dirac_spectrum_shooting(
    profile: &PotentialProfile,
    params: &ProblemParams,
    config: &OracleConfig,
) -> Result<Vec<ShootingRoot>> {
    let m = params.mass;
    let margin = 1e-6 * m;
    let v_inf = profile.v_at_infinity();
    let w_inf = profile.w_at_infinity();
    let kappa = params.kappa as f64;
    // admissible window: |eps| < m and real asymptotic decay
    let lim = (kappa * kappa * w_inf * w_inf + m * m).sqrt();
    let e_lo = (-m).max(v_inf - lim) + margin;
    let e_hi = m.min(v_inf + lim) - margin;

    let n_scan = config.scan_points.max(64);
    let grid: Vec<f64> = (0..n_scan)
        .map(|i| {
            let t = i as f64 / (n_scan - 1) as f64;
            e_lo + (e_hi - e_lo) * 0.5 * (1.0 - (std::f64::consts::PI * t).cos())
        })
        .collect();
    let mism: Vec<f64> = grid
        .iter()
        .map(|&e| phase_mismatch(profile, params, e, config))
        .collect::<Result<_>>()?;
    let cell = |x: f64| (x / std::f64::consts::PI).floor();

    let mut out = Vec::new();
    for i in 0..grid.len() - 1 {
        if cell(mism[i]) == cell(mism[i + 1]) {
            continue;
        }
        let mut stack = vec![(grid[i], grid[i + 1], mism[i], mism[i + 1])];
        while let Some((a, b, fa, fb)) = stack.pop() {
            let (ca, cb) = (cell(fa), cell(fb));
            if ca == cb {
                continue;
            }
            if (cb - ca).abs() > 1.0 && b - a > 1e-13 * m {
                let mid = 0.5 * (a + b);
                let fm = phase_mismatch(profile, params, mid, config)?;
                stack.push((a, mid, fa, fm));
                stack.push((mid, b, fm, fb));
                continue;
            }
            // bisect the single crossing
            let (mut x0, mut x1, mut f0) = (a, b, fa);
            for _ in 0..100 {
                let xm = 0.5 * (x0 + x1);
                if x1 - x0 < config.eps_tol.max(1e-14) * m * 1e-2 {
                    break;
                }
                let fm = phase_mismatch(profile, params, xm, config)?;
                if cell(fm) == cell(f0) {
                    x0 = xm;
                    f0 = fm;
                } else {
                    x1 = xm;
                }
            }
            let root = 0.5 * (x0 + x1);
            let nodes = node_count(profile, params, root, config)?;
            out.push(ShootingRoot {
                energy: root,
                nodes,
            });
        }
    }
    out.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    out.dedup_by(|a, b| (a.energy - b.energy).abs() < 1e-12 * m && a.nodes == b.nodes);
    Ok(out)
}
