//! Shared helpers for the integration suites: an independent leapfrog
//! reference solver for the radial wave equation and small utilities.
//!
//! The leapfrog solver never touches the spectral machinery under test: it
//! integrates `v_tt = v_rr + r F(v/r)` (with `v = r u`) by second-order
//! finite differences with Dirichlet ends, so agreement between the two
//! routes validates both.

use num_complex::Complex64;
use waveamalgam::amalgam::RadialProfile;
use waveamalgam::nlw::Nonlinearity;

/// Integrates the radial semilinear wave equation from `(f, g)` to time
/// `t_final` and returns the displacement profile. The grid is taken from
/// `f` (which must be the uniform spectral grid `j h`).
pub fn leapfrog_solve(
    f: &RadialProfile,
    g: &RadialProfile,
    nonlinearity: Option<&Nonlinearity>,
    t_final: f64,
) -> RadialProfile {
    let radii = &f.radii;
    let n = radii.len();
    let h = radii[0];
    // Courant number at most one; land exactly on t_final.
    let steps = (t_final / h).ceil().max(1.0) as usize;
    let dt = t_final / steps as f64;

    let rf = |profile: &RadialProfile| -> Vec<Complex64> {
        profile
            .values
            .iter()
            .zip(radii)
            .map(|(u, r)| u * *r)
            .collect()
    };
    let mut prev = rf(f);
    let vel: Vec<Complex64> = rf(g);

    let accel = |v: &[Complex64]| -> Vec<Complex64> {
        let mut a = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            let left = if j == 0 { Complex64::new(0.0, 0.0) } else { v[j - 1] };
            let right = if j == n - 1 { Complex64::new(0.0, 0.0) } else { v[j + 1] };
            let lap = (left - 2.0 * v[j] + right) / (h * h);
            let force = match nonlinearity {
                Some(nl) => nl.apply(v[j] / radii[j]) * radii[j],
                None => Complex64::new(0.0, 0.0),
            };
            a[j] = lap + force;
        }
        a
    };

    // Taylor start: v^1 = v^0 + dt v_t^0 + dt^2/2 a(v^0)
    let a0 = accel(&prev);
    let mut cur: Vec<Complex64> = (0..n)
        .map(|j| prev[j] + vel[j] * dt + a0[j] * (0.5 * dt * dt))
        .collect();

    for _ in 1..steps {
        let a = accel(&cur);
        let next: Vec<Complex64> =
            (0..n).map(|j| 2.0 * cur[j] - prev[j] + a[j] * (dt * dt)).collect();
        prev = cur;
        cur = next;
    }

    let values: Vec<Complex64> = cur.iter().zip(radii).map(|(v, r)| v / *r).collect();
    RadialProfile::new(radii.clone(), values).expect("leapfrog grid is valid")
}

/// Relative L^2(R^3) distance between two profiles on the same grid.
pub fn relative_l2_distance(a: &RadialProfile, b: &RadialProfile) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for ((va, vb), r) in a.values.iter().zip(&b.values).zip(&a.radii) {
        num += (va - vb).norm_sqr() * r * r;
        den += vb.norm_sqr() * r * r;
    }
    (num / den.max(1e-300)).sqrt()
}

/// Absolute L^2(R^3) distance between two profiles on the same grid.
#[allow(dead_code)]
pub fn absolute_l2_distance(a: &RadialProfile, b: &RadialProfile) -> f64 {
    let h = a.radii[0];
    let mut num = 0.0;
    for ((va, vb), r) in a.values.iter().zip(&b.values).zip(&a.radii) {
        num += (va - vb).norm_sqr() * r * r;
    }
    (4.0 * std::f64::consts::PI * h * num).sqrt()
}
