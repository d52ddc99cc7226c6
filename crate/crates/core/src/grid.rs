//! Small radial-grid helpers shared by the wavefunction and solver code.

/// Uniformly spaced grid including both endpoints.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least two points");
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + h * i as f64).collect()
}

/// Geometrically spaced grid including both endpoints (a, b > 0).
pub fn geomspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(
        n >= 2 && a > 0.0 && b > a,
        "geomspace needs 0 < a < b, n >= 2"
    );
    let step = (b / a).ln() / (n - 1) as f64;
    let mut v: Vec<f64> = (0..n).map(|i| a * (step * i as f64).exp()).collect();
    // pin the endpoints against rounding drift
    v[0] = a;
    v[n - 1] = b;
    v
}

/// Composite trapezoid rule on an arbitrary sorted grid.
pub fn trapezoid(r: &[f64], f: &[f64]) -> f64 {
    assert_eq!(r.len(), f.len());
    let mut acc = 0.0;
    for i in 1..r.len() {
        acc += 0.5 * (r[i] - r[i - 1]) * (f[i] + f[i - 1]);
    }
    acc
}
