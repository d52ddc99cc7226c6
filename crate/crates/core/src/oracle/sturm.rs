//! Sturm-sequence bisection for symmetric tridiagonal matrices.
//!
//! The number of negative pivots of the LDL^T factorization of A - sigma I
//! equals the number of eigenvalues below sigma; bisecting on that count
//! locates any eigenvalue to machine precision without ever forming the
//! spectrum. This stays robust even when the diagonal spans many orders of
//! magnitude, which the singular-potential discretizations here do.

/// Number of eigenvalues of the symmetric tridiagonal (diag, off) strictly
/// below `sigma`.
pub fn sturm_count(diag: &[f64], off: &[f64], sigma: f64) -> usize {
    debug_assert_eq!(off.len() + 1, diag.len());
    let mut count = 0;
    let mut q = diag[0] - sigma;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        if q == 0.0 {
            q = 1e-300;
        }
        q = (diag[i] - sigma) - off[i - 1] * off[i - 1] / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin bounds (lo, hi) containing the whole spectrum.
pub fn gershgorin_bounds(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i < n - 1 { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo, hi)
}

/// The k-th eigenvalue (k = 0 is the lowest), bisected to relative width
/// `tol` within the bracket [lo, hi]. The bracket must contain it; Gershgorin
/// bounds always work.
pub fn eigenvalue_k(diag: &[f64], off: &[f64], k: usize, lo: f64, hi: f64, tol: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    for _ in 0..220 {
        let mid = 0.5 * (a + b);
        if b - a <= tol * mid.abs().max(1.0) {
            break;
        }
        if sturm_count(diag, off, mid) > k {
            b = mid;
        } else {
            a = mid;
        }
    }
    0.5 * (a + b)
}

/// The `count` lowest eigenvalues.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], count: usize, tol: f64) -> Vec<f64> {
    let (lo, hi) = gershgorin_bounds(diag, off);
    (0..count.min(diag.len()))
        .map(|k| eigenvalue_k(diag, off, k, lo, hi, tol))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// -u'' on [0, L] with Dirichlet ends, uniform step.
    fn box_matrix(n: usize, l: f64) -> (Vec<f64>, Vec<f64>, f64) {
        let h = l / (n + 1) as f64;
        (vec![2.0 / (h * h); n], vec![-1.0 / (h * h); n - 1], h)
    }

    #[test]
    fn particle_in_a_box() {
        let l = 1.0;
        let (d, e, h) = box_matrix(1999, l);
        let eigs = lowest_eigenvalues(&d, &e, 3, 1e-13);
        for (k, ev) in eigs.iter().enumerate() {
            let exact = ((k + 1) as f64 * std::f64::consts::PI / l).powi(2);
            // second-order discretization error ~ exact * (kh)^2 / 12
            let bound = 2.0 * exact * exact * h * h / 12.0;
            assert!(
                (ev - exact).abs() < bound.max(1e-8),
                "k={k}: got {ev}, exact {exact}"
            );
        }
    }

    #[test]
    fn harmonic_ladder() {
        // -u'' + w^2 r^2 / 4 on (0, inf) with Dirichlet at 0 keeps the odd
        // oscillator states: E_k = w (2k + 3/2)
        let w = 2.0;
        let n = 6000;
        let l = 12.0;
        let h = l / (n + 1) as f64;
        let d: Vec<f64> = (1..=n)
            .map(|i| {
                let r = i as f64 * h;
                2.0 / (h * h) + 0.25 * w * w * r * r
            })
            .collect();
        let e = vec![-1.0 / (h * h); n - 1];
        let eigs = lowest_eigenvalues(&d, &e, 3, 1e-13);
        for (k, ev) in eigs.iter().enumerate() {
            let exact = w * (2.0 * k as f64 + 1.5);
            assert_relative_eq!(*ev, exact, max_relative = 1e-5);
        }
    }

    #[test]
    fn constant_shift_moves_spectrum_exactly() {
        let (d, e, _) = box_matrix(500, 3.0);
        let shift = 7.25;
        let shifted: Vec<f64> = d.iter().map(|x| x + shift).collect();
        let base = lowest_eigenvalues(&d, &e, 4, 1e-13);
        let moved = lowest_eigenvalues(&shifted, &e, 4, 1e-13);
        for (a, b) in base.iter().zip(&moved) {
            assert_relative_eq!(a + shift, *b, max_relative = 1e-10);
        }
    }

    #[test]
    fn count_matches_located_eigenvalues() {
        let (d, e, _) = box_matrix(300, 2.0);
        let eigs = lowest_eigenvalues(&d, &e, 5, 1e-13);
        let sigma = 0.5 * (eigs[3] + eigs[4]);
        assert_eq!(sturm_count(&d, &e, sigma), 4);
    }
}
