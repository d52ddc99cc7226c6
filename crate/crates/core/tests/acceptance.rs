//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines
//! for passing criteria too.

use dirac_bound::eckart::{
    eckart_epsilon, eckart_node_count, eckart_nonrel, eckart_pair, eckart_spectrum,
};
use dirac_bound::hulthen::{
    hulthen_epsilon, hulthen_node_count, hulthen_nonrel, hulthen_pair, hulthen_spectrum,
};
use dirac_bound::model::{derive, Branch, ProblemParams};
use dirac_bound::oracle::{dirac_shoot, dirac_spectrum_shooting, fd_spectrum, OracleConfig};
use dirac_bound::reduction::{first_order_residual, OrbitalTerm, PotentialProfile};
use dirac_bound::specfun::{hyp2f1_poly, hyp2f1_poly_deriv, jacobi_p, jacobi_p_deriv};
use dirac_bound::{grid, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SWEEP_LAMBDA: [f64; 3] = [0.1, 0.2, 0.5];
const SWEEP_STRENGTH: [f64; 4] = [-0.7, -0.3, 0.3, 0.7];
const SWEEP_KAPPA: [i32; 5] = [-2, -1, 1, 2, 3];

fn report(id: u32, ok: bool, detail: &str) {
    println!(
        "[acceptance {id}] {} - {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} failed: {detail}");
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// (a+1)_n / n!, the Jacobi endpoint value.
fn pochhammer_ratio(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (a + 1.0 + k as f64) / (k as f64 + 1.0))
}

/// Unsigned term sum of the terminating series: the working magnitude its
/// f64 evaluation is conditioned by.
fn series_condition(n: u32, b: f64, c: f64, z: f64) -> f64 {
    let mut sum = 1.0f64;
    let mut t = 1.0f64;
    for k in 0..n {
        let kf = k as f64;
        t *= ((kf - n as f64) * (b + kf) / ((c + kf) * (kf + 1.0)) * z).abs();
        sum += t;
    }
    sum
}

/// Central difference with one Richardson step (h and h/2).
fn richardson_diff(f: impl Fn(f64) -> f64, z: f64) -> f64 {
    let h = 1e-6;
    let d1 = (f(z + h) - f(z - h)) / (2.0 * h);
    let d2 = (f(z + 0.5 * h) - f(z - 0.5 * h)) / h;
    (4.0 * d2 - d1) / 3.0
}

enum Potential {
    Hulthen,
    Eckart,
}

/// Both branches of the closed-form bound spectrum, ascending; the strong
/// screening regime (level-count formula undefined) contributes no levels.
fn analytic_union(p: &ProblemParams, which: &Potential) -> Vec<f64> {
    let mut out = Vec::new();
    for branch in [Branch::Positive, Branch::Negative] {
        let eps_list: Vec<f64> = match which {
            Potential::Hulthen => match hulthen_spectrum(p, branch) {
                Ok(v) => v.iter().map(|l| l.epsilon).collect(),
                Err(Error::NoBoundLevels { .. }) => vec![],
                Err(e) => panic!("unexpected error: {e}"),
            },
            Potential::Eckart => match eckart_spectrum(p, branch) {
                Ok(v) => v.iter().map(|l| l.epsilon).collect(),
                Err(Error::NoBoundLevels { .. }) => vec![],
                Err(e) => panic!("unexpected error: {e}"),
            },
        };
        out.extend(eps_list);
    }
    out.sort_by(f64::total_cmp);
    out
}

fn spectrum_equivalence(which: Potential, id: u32) {
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for lam in SWEEP_LAMBDA {
        for ratio in SWEEP_STRENGTH {
            for kap in SWEEP_KAPPA {
                let p = ProblemParams::new(1.0, lam, ratio * lam, kap).unwrap();
                let profile = match which {
                    Potential::Hulthen => PotentialProfile::hulthen(&p, OrbitalTerm::ApproxOrbital),
                    Potential::Eckart => PotentialProfile::eckart(&p, OrbitalTerm::ApproxOrbital),
                };
                let expected = analytic_union(&p, &which);
                let cfg = OracleConfig::for_params(&p);
                let roots = fd_spectrum(&profile, &p, &cfg).unwrap();
                if roots.len() != expected.len() {
                    report(
                        id,
                        false,
                        &format!(
                            "level count mismatch at lam={lam} v0/lam={ratio} kappa={kap}: \
                             analytic {} vs oracle {}",
                            expected.len(),
                            roots.len()
                        ),
                    );
                }
                for (root, a) in roots.iter().zip(&expected) {
                    let r = rel(root.energy, *a);
                    worst = worst.max(r);
                    checked += 1;
                    if r > 1e-6 {
                        report(
                            id,
                            false,
                            &format!(
                                "lam={lam} v0/lam={ratio} kappa={kap}: oracle {} vs analytic {a} \
                                 (rel {r:.2e})",
                                root.energy
                            ),
                        );
                    }
                }
            }
        }
    }
    report(
        id,
        true,
        &format!("{checked} levels matched across the sweep, worst rel dev {worst:.2e}"),
    );
}

#[test]
fn criterion_1_hulthen_spectrum_matches_secular_oracle() {
    spectrum_equivalence(Potential::Hulthen, 1);
}

#[test]
fn criterion_2_eckart_spectrum_matches_secular_oracle() {
    spectrum_equivalence(Potential::Eckart, 2);
}

#[test]
fn criterion_3_coulomb_limit_convergence() {
    let mu = -0.3;
    let g = (1.0f64 - mu * mu).sqrt();
    let floor = 1e-12;
    let mut detail = String::new();
    for n in [0u32, 1, 2] {
        let coulomb = 1.0 / (1.0 + mu * mu / (n as f64 + g).powi(2)).sqrt();
        for which in ["hulthen", "eckart"] {
            let devs: Vec<f64> = [1e-1, 1e-2, 1e-3]
                .iter()
                .map(|&lam| {
                    let p = ProblemParams::new(1.0, lam, mu * lam, -1).unwrap();
                    let e = match which {
                        "hulthen" => hulthen_epsilon(&p, n).unwrap(),
                        _ => eckart_epsilon(&p, n).unwrap(),
                    };
                    (e - coulomb).abs()
                })
                .collect();
            if devs.iter().all(|&d| d < floor) {
                detail.push_str(&format!("{which} n={n}: at machine floor; "));
                continue;
            }
            let decreasing = devs[0] > devs[1] && devs[1] > devs[2];
            let final_ratio = devs[1] / devs[2].max(floor);
            if !decreasing || final_ratio < 8.0 {
                report(
                    3,
                    false,
                    &format!("{which} n={n}: devs {devs:?}, final decade ratio {final_ratio:.2}"),
                );
            }
            detail.push_str(&format!("{which} n={n}: ratio {final_ratio:.1}; "));
        }
    }
    report(3, true, &detail);
}

#[test]
fn criterion_4_shooting_reproduces_dirac_coulomb() {
    let mu = -0.3;
    let p = ProblemParams::new(1.0, 1.0, mu, -1).unwrap();
    let profile = PotentialProfile::coulomb(mu);
    let mut cfg = OracleConfig::for_params(&p);
    cfg.r_min = 1e-8;
    cfg.eps_tol = 1e-10;
    let g = (1.0f64 - mu * mu).sqrt();
    let mut worst = 0.0f64;
    for nr in 0..3 {
        let exact = 1.0 / (1.0 + mu * mu / (nr as f64 + g).powi(2)).sqrt();
        // bisect the matching determinant in a bracket around the closed form
        let (mut a, mut b) = (exact - 2e-4, exact + 2e-4);
        let mut fa = dirac_shoot(&profile, &p, a, &cfg).unwrap();
        let fb = dirac_shoot(&profile, &p, b, &cfg).unwrap();
        if fa * fb >= 0.0 {
            report(4, false, &format!("nr={nr}: determinant does not bracket"));
        }
        for _ in 0..60 {
            let mid = 0.5 * (a + b);
            if b - a < 1e-13 {
                break;
            }
            let fm = dirac_shoot(&profile, &p, mid, &cfg).unwrap();
            if (fm < 0.0) == (fa < 0.0) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        let root = 0.5 * (a + b);
        let r = rel(root, exact);
        worst = worst.max(r);
        if r > 1e-8 {
            report(
                4,
                false,
                &format!("nr={nr}: shooting {root} vs exact {exact} (rel {r:.2e})"),
            );
        }
    }
    report(
        4,
        true,
        &format!("3 lowest levels at worst rel dev {worst:.2e}"),
    );
}

#[test]
fn criterion_5_exact_orbital_deviation_shrinks_with_screening() {
    let lams = [0.5, 0.2, 0.1, 0.05];
    let mut per_level: Vec<Vec<f64>> = Vec::new();
    let mut common = usize::MAX;
    for &lam in &lams {
        let p = ProblemParams::new(1.0, lam, -0.5 * lam, -1).unwrap();
        let spec = hulthen_spectrum(&p, Branch::Positive).unwrap();
        let profile = PotentialProfile::hulthen(&p, OrbitalTerm::ExactOrbital);
        let mut cfg = OracleConfig::for_params(&p);
        cfg.scan_points = 500;
        let roots = dirac_spectrum_shooting(&profile, &p, &cfg).unwrap();
        if roots.len() != spec.len() {
            report(
                5,
                false,
                &format!(
                    "lam={lam}: exact-orbital level count {} vs analytic {}",
                    roots.len(),
                    spec.len()
                ),
            );
        }
        common = common.min(spec.len());
        per_level.push(
            roots
                .iter()
                .zip(&spec)
                .map(|(r, l)| (r.energy - l.epsilon).abs())
                .collect(),
        );
    }
    // levels present across the entire sweep must improve monotonically
    let mut detail = String::new();
    for lvl in 0..common {
        let devs: Vec<f64> = per_level.iter().map(|v| v[lvl]).collect();
        for w in devs.windows(2) {
            if w[1] >= w[0] {
                report(
                    5,
                    false,
                    &format!("level {lvl}: deviations not monotone: {devs:?}"),
                );
            }
        }
        detail.push_str(&format!("level {lvl}: {devs:?}; "));
    }
    // deviations of later-appearing levels are recorded, not asserted
    for (i, v) in per_level.iter().enumerate() {
        if v.len() > common {
            detail.push_str(&format!("lam={} extra {:?}; ", lams[i], &v[common..]));
        }
    }
    report(5, true, &detail);
}

#[test]
fn criterion_6_wavefunction_residuals_and_nodes() {
    let mut worst_res = 0.0f64;
    let mut worst_ratio = f64::INFINITY;
    let mut checked = 0usize;
    for lam in SWEEP_LAMBDA {
        for ratio in SWEEP_STRENGTH {
            for kap in SWEEP_KAPPA {
                let p = ProblemParams::new(1.0, lam, ratio * lam, kap).unwrap();
                let d = derive(&p).unwrap();
                // hulthen levels
                if let Ok(spec) = hulthen_spectrum(&p, Branch::Positive) {
                    let profile = PotentialProfile::hulthen(&p, OrbitalTerm::ApproxOrbital);
                    for lvl in &spec {
                        let decay = p.lambda * lvl.alpha_n;
                        let r_hi = 35.0 / decay;
                        let g8 = grid::linspace(0.02 * r_hi, r_hi, 8000);
                        let g16 = grid::linspace(0.02 * r_hi, r_hi, 16000);
                        let pair8 = hulthen_pair(&p, lvl, &g8).unwrap();
                        let pair16 = hulthen_pair(&p, lvl, &g16).unwrap();
                        let r8 =
                            first_order_residual(&pair8.rotated, &p, &d, lvl.epsilon, &profile, 4)
                                .unwrap();
                        let r16 =
                            first_order_residual(&pair16.rotated, &p, &d, lvl.epsilon, &profile, 4)
                                .unwrap();
                        let nodes = hulthen_node_count(&p, lvl).unwrap();
                        worst_res = worst_res.max(r8);
                        worst_ratio = worst_ratio.min(r8 / r16);
                        checked += 1;
                        if r8 > 1e-6 || r8 / r16 < 3.5 || nodes != lvl.spinor_index as usize {
                            report(
                                6,
                                false,
                                &format!(
                                    "hulthen lam={lam} v0r={ratio} kap={kap} n={}: residual(8000)={r8:.2e}, \
                                     reduction {:.1}, nodes {nodes} (expect {})",
                                    lvl.n,
                                    r8 / r16,
                                    lvl.spinor_index
                                ),
                            );
                        }
                    }
                }
                // eckart levels
                if let Ok(spec) = eckart_spectrum(&p, Branch::Positive) {
                    let profile = PotentialProfile::eckart(&p, OrbitalTerm::ApproxOrbital);
                    for lvl in &spec {
                        if lvl.critical {
                            continue;
                        }
                        let decay = 2.0 * p.lambda * lvl.beta_n;
                        let r_hi = 35.0 / decay;
                        let g8 = grid::linspace(0.02 * r_hi, r_hi, 8000);
                        let g16 = grid::linspace(0.02 * r_hi, r_hi, 16000);
                        let pair8 = eckart_pair(&p, lvl, &g8).unwrap();
                        let pair16 = eckart_pair(&p, lvl, &g16).unwrap();
                        let r8 =
                            first_order_residual(&pair8.rotated, &p, &d, lvl.epsilon, &profile, 4)
                                .unwrap();
                        let r16 =
                            first_order_residual(&pair16.rotated, &p, &d, lvl.epsilon, &profile, 4)
                                .unwrap();
                        let nodes = eckart_node_count(&p, lvl).unwrap();
                        worst_res = worst_res.max(r8);
                        worst_ratio = worst_ratio.min(r8 / r16);
                        checked += 1;
                        if r8 > 1e-6 || r8 / r16 < 3.5 || nodes != lvl.spinor_index as usize {
                            report(
                                6,
                                false,
                                &format!(
                                    "eckart lam={lam} v0r={ratio} kap={kap} n={}: residual(8000)={r8:.2e}, \
                                     reduction {:.1}, nodes {nodes} (expect {})",
                                    lvl.n,
                                    r8 / r16,
                                    lvl.spinor_index
                                ),
                            );
                        }
                    }
                }
            }
        }
    }
    report(
        6,
        true,
        &format!(
            "{checked} levels: worst residual {worst_res:.2e}, weakest refinement gain {worst_ratio:.1}x"
        ),
    );
}

#[test]
fn criterion_7_symmetries_and_limits() {
    // (a) the negative-energy map applied twice reproduces positive spectra
    let mut worst_invol = 0.0f64;
    for lam in SWEEP_LAMBDA {
        for ratio in SWEEP_STRENGTH {
            for kap in SWEEP_KAPPA {
                let p = ProblemParams::new(1.0, lam, ratio * lam, kap).unwrap();
                let pos = match hulthen_spectrum(&p, Branch::Positive) {
                    Ok(v) => v,
                    Err(_) => continue,
                };
                let back = hulthen_spectrum(&p.charge_conjugate(), Branch::Negative).unwrap();
                assert_eq!(pos.len(), back.len());
                for (a, b) in pos.iter().zip(back.iter().rev()) {
                    worst_invol = worst_invol.max(rel(a.epsilon, -b.epsilon));
                }
            }
        }
    }
    let invol_ok = worst_invol <= 1e-12;
    println!("  [7a] map involution: worst rel {worst_invol:.2e} (<= 1e-12: {invol_ok})");

    // (b) the lowest formula entry equals m cos(theta) to 1e-14
    let mut worst_ground = 0.0f64;
    for lam in SWEEP_LAMBDA {
        for ratio in SWEEP_STRENGTH {
            for kap in SWEEP_KAPPA {
                let p = ProblemParams::new(1.0, lam, ratio * lam, kap).unwrap();
                let d = derive(&p).unwrap();
                worst_ground = worst_ground.max(rel(hulthen_epsilon(&p, 0).unwrap(), d.cos_theta));
                worst_ground = worst_ground.max(rel(eckart_epsilon(&p, 0).unwrap(), d.cos_theta));
            }
        }
    }
    let ground_ok = worst_ground <= 1e-14;
    println!(
        "  [7b] ground entry m*cos(theta): worst rel {worst_ground:.2e} (<= 1e-14: {ground_ok})"
    );

    // (c) nonrelativistic formulas vs eps_n - m at m=1, lambda=0.01,
    //     v0=-0.005, kappa=-1, to 1e-2 relative
    let p = ProblemParams::new(1.0, 0.01, -0.005, -1).unwrap();
    let mut worst_nonrel = 0.0f64;
    let mut lines = String::new();
    for n in 0..3u32 {
        let eh = hulthen_epsilon(&p, n).unwrap() - 1.0;
        let enr_h = hulthen_nonrel(p.v0, p.lambda, n, 0);
        let ee = eckart_epsilon(&p, n).unwrap() - 1.0;
        let enr_e = eckart_nonrel(p.v0, p.lambda, n, 0);
        let (rh, re) = (rel(eh, enr_h), rel(ee, enr_e));
        worst_nonrel = worst_nonrel.max(rh).max(re);
        lines.push_str(&format!("n={n}: hulthen {rh:.3}, eckart {re:.3}; "));
    }
    let nonrel_ok = worst_nonrel <= 1e-2;
    println!("  [7c] nonrelativistic limits: measured rel gaps {lines}(<= 1e-2: {nonrel_ok})");

    report(
        7,
        invol_ok && ground_ok && nonrel_ok,
        &format!(
            "involution {worst_invol:.2e}, ground identity {worst_ground:.2e}, \
             nonrel gap {worst_nonrel:.3} vs required 1e-2"
        ),
    );
}

#[test]
fn criterion_8_special_function_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut cases = 0usize;

    // termination: the series equals Horner evaluation of its coefficients
    for _ in 0..300 {
        let n: u32 = rng.gen_range(0..=10);
        let b: f64 = rng.gen_range(-5.0..5.0);
        let c: f64 = rng.gen_range(0.3..5.0); // away from poles
        let z: f64 = rng.gen_range(-2.0..2.0);
        let mut coeffs = vec![1.0f64];
        let mut t = 1.0;
        for k in 0..n {
            let kf = k as f64;
            t *= (kf - n as f64) * (b + kf) / ((c + kf) * (kf + 1.0));
            coeffs.push(t);
        }
        let horner = coeffs.iter().rev().fold(0.0, |acc, &ck| acc * z + ck);
        // conditioning scale: alternating terms can cancel far below their
        // own magnitude, which bounds what any f64 evaluation can agree to
        let cond: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, &ck)| (ck * z.powi(k as i32)).abs())
            .sum();
        let v = hyp2f1_poly(n, b, c, z).unwrap();
        assert!(
            (v - horner).abs() <= 1e-12 * cond.max(1.0),
            "horner mismatch at n={n} b={b} c={c} z={z}: {v} vs {horner}"
        );
        cases += 1;
    }

    // jacobi symmetry P_n^(a,b)(-z) = (-1)^n P_n^(b,a)(z)
    for _ in 0..300 {
        let n: u32 = rng.gen_range(0..=8);
        let a: f64 = rng.gen_range(-5.0..5.0);
        let b: f64 = rng.gen_range(-5.0..5.0);
        // keep clear of integer-pole degeneracies
        if (a + 1.0).fract().abs() < 0.05 || (b + 1.0).fract().abs() < 0.05 {
            continue;
        }
        let z: f64 = rng.gen_range(-1.0..1.0);
        let lhs = jacobi_p(n, a, b, -z).unwrap();
        let rhs = jacobi_p(n, b, a, z).unwrap() * if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        // working magnitude of the evaluation: endpoint values bound the
        // coefficient scale, below which agreement is conditioning-limited
        let scale = lhs
            .abs()
            .max(rhs.abs())
            .max(pochhammer_ratio(a, n).abs())
            .max(pochhammer_ratio(b, n).abs());
        assert!(
            (lhs - rhs).abs() <= 1e-10 * scale.max(1.0),
            "symmetry failed at n={n} a={a} b={b} z={z}: {lhs} vs {rhs}"
        );
        cases += 1;
    }

    // endpoint: P_n^(a,b)(1) = (a+1)_n / n!
    for _ in 0..200 {
        let n: u32 = rng.gen_range(0..=8);
        let a: f64 = rng.gen_range(-4.9..5.0);
        let b: f64 = rng.gen_range(-5.0..5.0);
        if (a + 1.0).fract().abs() < 0.05 {
            continue;
        }
        let poch = pochhammer_ratio(a, n);
        let v = jacobi_p(n, a, b, 1.0).unwrap();
        assert!(
            (v - poch).abs() <= 1e-12 * poch.abs().max(1.0),
            "endpoint failed at n={n} a={a} b={b}: {v} vs {poch}"
        );
        cases += 1;
    }

    // derivatives vs central finite differences
    for _ in 0..300 {
        let n: u32 = rng.gen_range(1..=8);
        let a: f64 = rng.gen_range(-3.0..3.0);
        let b: f64 = rng.gen_range(-3.0..3.0);
        if (a + 1.0).fract().abs() < 0.05 || (a + 2.0).fract().abs() < 0.05 {
            continue;
        }
        let z: f64 = rng.gen_range(-0.9..0.9);
        // Richardson-extrapolated central differences (steps h and h/2) so
        // the oracle's truncation sits well below the tolerance; the
        // remaining floor is rounding ~ cond * ulp / h, with cond the
        // unsigned term sum of the defining series
        let fd = richardson_diff(|x| jacobi_p(n, a, b, x).unwrap(), z);
        let cond_j = pochhammer_ratio(a, n).abs()
            * series_condition(n, n as f64 + a + b + 1.0, a + 1.0, 0.5 * (1.0 - z));
        let an = jacobi_p_deriv(n, a, b, z).unwrap();
        assert!(
            (an - fd).abs() <= 1e-7 * an.abs().max(fd.abs()) + 1e-9 * cond_j.max(1.0),
            "jacobi derivative failed at n={n} a={a} b={b} z={z}: {an} vs {fd}"
        );
        let c: f64 = rng.gen_range(0.3..4.0);
        let bb: f64 = rng.gen_range(-4.0..4.0);
        // argument range mirrors actual use: 1 - 2x in (-1, 1) for the
        // screened-exponential variable, (1-x)/2 <= 0 for the coth one
        let zz: f64 = rng.gen_range(-1.5..0.9);
        let fd2 = richardson_diff(|x| hyp2f1_poly(n, bb, c, x).unwrap(), zz);
        let cond_g = series_condition(n, bb, c, zz);
        let an2 = hyp2f1_poly_deriv(n, bb, c, zz).unwrap();
        assert!(
            (an2 - fd2).abs() <= 1e-7 * an2.abs().max(fd2.abs()) + 1e-9 * cond_g.max(1.0),
            "series derivative failed at n={n} b={bb} c={c} z={zz}: {an2} vs {fd2}"
        );
        cases += 2;
    }

    report(
        8,
        cases >= 1000,
        &format!("{cases} randomized cases passed"),
    );
}
