//! Discretized Wiener amalgam norms.
//!
//! The amalgam norm `W(p, q)` measures local `L^p` content through sliding
//! window translates and global `l^q` decay of the windowed norms:
//!
//! ```text
//! ||f||_{W(p,q)} = || ||f . tau_x phi||_{L^p} ||_{L^q_x}
//! ```
//!
//! Two discretizations are provided. The one-dimensional form
//! ([`amalgam_norm_1d`]) slides the window over an integer lattice with
//! spacing equal to the window support radius. The radial three-dimensional
//! form ([`amalgam_norm_radial`]) uses the exact reduction that
//! `||f tau_y phi||` depends only on `|y|` for radial `f` and `phi`: each
//! sphere shell meets the window ball in a spherical cap, and the cap
//! geometry collapses to a one-dimensional kernel in the shell radius.
//!
//! Window constants are never normalized away; every experiment downstream is
//! formulated on ratios or log-log slopes, which are window independent.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::rational::ExtendedRational;
use crate::regions::ExponentTuple;

#[derive(Debug, Error)]
pub enum AmalgamError {
    #[error("signal is empty")]
    EmptySignal,
    #[error("signal values must be nonnegative reals")]
    NegativeValues,
    #[error("mismatched grids: {0}")]
    GridMismatch(String),
    #[error("domain error: {0}")]
    Domain(String),
}

/// Compactly supported window profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowProfile {
    /// `exp(-1/(1 - (x/R)^2))` inside `|x| < R`, infinitely differentiable.
    SmoothBump,
    /// `cos(pi x / (2R))` inside `|x| <= R`. Its squares tile the lattice of
    /// spacing `R` exactly: `sum_k cos^2(pi (x - kR)/(2R)) = 1`.
    CosineTaper,
}

/// Window specification used by every amalgam norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub support_radius: f64,
    pub profile: WindowProfile,
    pub l2_normalized: bool,
}

impl Default for Window {
    fn default() -> Self {
        Window { support_radius: 1.0, profile: WindowProfile::SmoothBump, l2_normalized: true }
    }
}

impl Window {
    pub fn cosine() -> Self {
        Window { support_radius: 1.0, profile: WindowProfile::CosineTaper, l2_normalized: true }
    }

    /// Unnormalized profile value at signed offset `x`.
    pub fn raw_value(&self, x: f64) -> f64 {
        let u = x / self.support_radius;
        let u2 = u * u;
        if u2 >= 1.0 {
            return 0.0;
        }
        match self.profile {
            WindowProfile::SmoothBump => (-1.0 / (1.0 - u2)).exp(),
            WindowProfile::CosineTaper => (std::f64::consts::FRAC_PI_2 * u).cos(),
        }
    }

    /// Scale factor making the 1-d `L^2(R)` norm equal to one.
    pub fn normalization_1d(&self) -> f64 {
        if !self.l2_normalized {
            return 1.0;
        }
        let mass = integrate_dense(0.0, self.support_radius, 4096, |x| {
            let v = self.raw_value(x);
            2.0 * v * v
        });
        1.0 / mass.sqrt()
    }

    /// Scale factor making the radial `L^2(R^3)` norm equal to one.
    pub fn normalization_radial(&self) -> f64 {
        if !self.l2_normalized {
            return 1.0;
        }
        let mass = integrate_dense(0.0, self.support_radius, 4096, |s| {
            let v = self.raw_value(s);
            4.0 * std::f64::consts::PI * s * s * v * v
        });
        1.0 / mass.sqrt()
    }
}

/// Uniformly sampled signal on a 1-d grid.
#[derive(Debug, Clone)]
pub struct SampledSignal {
    pub values: Vec<Complex64>,
    pub grid_start: f64,
    pub grid_step: f64,
}

impl SampledSignal {
    pub fn new(values: Vec<Complex64>, grid_start: f64, grid_step: f64) -> Result<Self, AmalgamError> {
        if values.is_empty() {
            return Err(AmalgamError::EmptySignal);
        }
        if !(grid_step > 0.0) {
            return Err(AmalgamError::Domain(format!("grid step must be positive, got {grid_step}")));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(AmalgamError::Domain("signal contains non-finite values".into()));
        }
        Ok(Self { values, grid_start, grid_step })
    }

    pub fn real(values: Vec<f64>, grid_start: f64, grid_step: f64) -> Result<Self, AmalgamError> {
        Self::new(values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(), grid_start, grid_step)
    }

    fn x(&self, i: usize) -> f64 {
        self.grid_start + i as f64 * self.grid_step
    }

    fn grid_end(&self) -> f64 {
        self.x(self.values.len() - 1)
    }
}

/// Sampled radial function of `|x|`; dimension fixed to 3 for all numerics.
/// Values outside the sampled radius range are treated as zero: profiles are
/// truncated, never extrapolated.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    pub dimension: u32,
    pub radii: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl RadialProfile {
    pub fn new(radii: Vec<f64>, values: Vec<Complex64>) -> Result<Self, AmalgamError> {
        if radii.is_empty() || radii.len() != values.len() {
            return Err(AmalgamError::GridMismatch(format!(
                "radii ({}) and values ({}) must be nonempty and equal in length",
                radii.len(),
                values.len()
            )));
        }
        if radii.windows(2).any(|w| !(w[1] > w[0])) || !(radii[0] >= 0.0) {
            return Err(AmalgamError::Domain("radii must be strictly increasing and nonnegative".into()));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(AmalgamError::Domain("profile contains non-finite values".into()));
        }
        Ok(Self { dimension: 3, radii, values })
    }

    pub fn from_real(radii: Vec<f64>, values: Vec<f64>) -> Result<Self, AmalgamError> {
        Self::new(radii, values.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    }

    /// Midpoint grid `(j + 1/2) h` over `[0, r_max]` from a value function.
    pub fn sample_midpoints(
        r_max: f64,
        points: usize,
        mut value: impl FnMut(f64) -> Complex64,
    ) -> Result<Self, AmalgamError> {
        let h = r_max / points as f64;
        let radii: Vec<f64> = (0..points).map(|j| (j as f64 + 0.5) * h).collect();
        let values = radii.iter().map(|&r| value(r)).collect();
        Self::new(radii, values)
    }

    pub fn r_max(&self) -> f64 {
        *self.radii.last().unwrap()
    }

    fn abs_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    /// Typical grid step, used to choose quadrature resolutions.
    fn median_step(&self) -> f64 {
        if self.radii.len() == 1 {
            return self.radii[0].max(1e-3);
        }
        let mut steps: Vec<f64> = self.radii.windows(2).map(|w| w[1] - w[0]).collect();
        steps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        steps[steps.len() / 2]
    }
}

fn positive_exponent(name: &str, e: ExtendedRational) -> Result<f64, AmalgamError> {
    if !e.is_positive() {
        return Err(AmalgamError::Domain(format!("{name} must be positive, got {e}")));
    }
    Ok(e.to_f64())
}

/// Discrete weak-Lorentz norm `sup_k v_(k) (k step)^{1/q}` where `v_(k)` is
/// the k-th largest sample.
pub fn weak_lorentz_norm(signal: &SampledSignal, q: ExtendedRational) -> Result<f64, AmalgamError> {
    let qf = positive_exponent("q", q)?;
    if signal.values.iter().any(|v| v.im != 0.0 || v.re < 0.0) {
        return Err(AmalgamError::NegativeValues);
    }
    let mut vals: Vec<f64> = signal.values.iter().map(|v| v.re).collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut best = 0.0f64;
    for (i, v) in vals.iter().enumerate() {
        let measure = (i + 1) as f64 * signal.grid_step;
        let weight = if qf.is_infinite() { 1.0 } else { measure.powf(1.0 / qf) };
        best = best.max(v * weight);
    }
    Ok(best)
}

fn lattice_norms(signal: &SampledSignal, inner_p: f64, window: &Window) -> (Vec<f64>, f64) {
    let spacing = window.support_radius;
    let scale = window.normalization_1d();
    let k_min = ((signal.grid_start - spacing) / spacing).floor() as i64;
    let k_max = ((signal.grid_end() + spacing) / spacing).ceil() as i64;
    let dx = signal.grid_step;
    let mut g = Vec::with_capacity((k_max - k_min + 1) as usize);
    for k in k_min..=k_max {
        let center = k as f64 * spacing;
        let lo = ((center - spacing - signal.grid_start) / dx).floor().max(0.0) as usize;
        let hi = (((center + spacing - signal.grid_start) / dx).ceil() as usize)
            .min(signal.values.len() - 1);
        let mut acc = 0.0f64;
        let mut sup = 0.0f64;
        for i in lo..=hi {
            let w = scale * window.raw_value(signal.x(i) - center);
            if w == 0.0 {
                continue;
            }
            let m = signal.values[i].norm() * w;
            if inner_p.is_infinite() {
                sup = sup.max(m);
            } else {
                acc += m.powf(inner_p) * dx;
            }
        }
        g.push(if inner_p.is_infinite() { sup } else { acc.powf(1.0 / inner_p) });
    }
    (g, spacing)
}

/// One-dimensional amalgam norm over the lattice of window translates.
/// With `outer_weak` the outer `l^q` norm is replaced by the weak-Lorentz
/// norm of the windowed sequence.
pub fn amalgam_norm_1d(
    signal: &SampledSignal,
    inner_p: ExtendedRational,
    outer_q: ExtendedRational,
    window: &Window,
    outer_weak: bool,
) -> Result<f64, AmalgamError> {
    if signal.values.is_empty() {
        return Err(AmalgamError::EmptySignal);
    }
    let p = positive_exponent("inner exponent", inner_p)?;
    let qf = positive_exponent("outer exponent", outer_q)?;
    let (g, spacing) = lattice_norms(signal, p, window);
    if outer_weak {
        let gsig = SampledSignal::real(g, 0.0, spacing)?;
        return weak_lorentz_norm(&gsig, outer_q);
    }
    if qf.is_infinite() {
        return Ok(g.iter().copied().fold(0.0, f64::max));
    }
    let terms: Vec<f64> = g.iter().map(|v| v.powf(qf) * spacing).collect();
    Ok(pairwise_sum(&terms).powf(1.0 / qf))
}

/// Cumulative table of `G(u) = Int_0^u w(v)^p v dv` for a radial window
/// value function; shared across a whole rho sweep.
struct WindowTable {
    radius: f64,
    cum: Vec<f64>,
    step: f64,
}

impl WindowTable {
    fn build(radius: f64, p: f64, value: impl Fn(f64) -> f64) -> Self {
        let n = 8192usize;
        let step = radius / n as f64;
        let mut cum = Vec::with_capacity(n + 1);
        cum.push(0.0);
        let mut acc = 0.0;
        for i in 0..n {
            let a = i as f64 * step;
            acc += gl4(a, a + step, |u| value(u).powf(p) * u);
            cum.push(acc);
        }
        WindowTable { radius, cum, step }
    }

    fn g(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        if u >= self.radius {
            return *self.cum.last().unwrap();
        }
        let x = u / self.step;
        let i = (x.floor() as usize).min(self.cum.len() - 2);
        let frac = x - i as f64;
        self.cum[i] * (1.0 - frac) + self.cum[i + 1] * frac
    }
}

const GL4_X: [f64; 2] = [0.339981043584856265, 0.861136311594052575];
const GL4_W: [f64; 2] = [0.652145154862546143, 0.347854845137453857];

fn gl4(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..2 {
        let dx = half * GL4_X[i];
        acc += GL4_W[i] * (f(mid + dx) + f(mid - dx));
    }
    acc * half
}

fn integrate_dense(a: f64, b: f64, cells: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / cells as f64;
    let mut acc = 0.0;
    for i in 0..cells {
        let lo = a + i as f64 * h;
        acc += gl4(lo, lo + h, &f);
    }
    acc
}

/// Pairwise tree summation; deterministic and more accurate than a plain
/// left fold on long vectors.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

/// Piecewise-linear interpolation of |f| on the profile grid, zero outside.
fn interp_abs(radii: &[f64], absv: &[f64], s: f64) -> f64 {
    let n = radii.len();
    if s < radii[0] || s > radii[n - 1] {
        return 0.0;
    }
    let i = match radii.binary_search_by(|r| r.partial_cmp(&s).unwrap()) {
        Ok(i) => return absv[i],
        Err(i) => i,
    };
    let (r0, r1) = (radii[i - 1], radii[i]);
    let frac = (s - r0) / (r1 - r0);
    absv[i - 1] * (1.0 - frac) + absv[i] * frac
}

/// Integration breakpoints in `[lo, hi]`: the profile grid plus kink points,
/// each segment capped at `max_len`.
fn segments(radii: &[f64], lo: f64, hi: f64, kinks: &[f64], max_len: f64) -> Vec<f64> {
    let mut pts = vec![lo, hi];
    for &r in radii {
        if r > lo && r < hi {
            pts.push(r);
        }
    }
    for &k in kinks {
        if k > lo && k < hi {
            pts.push(k);
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let mut refined = Vec::with_capacity(pts.len());
    refined.push(pts[0]);
    for w in pts.windows(2) {
        let len = w[1] - w[0];
        if len > max_len {
            let sub = (len / max_len).ceil() as usize;
            for j in 1..sub {
                refined.push(w[0] + len * j as f64 / sub as f64);
            }
        }
        refined.push(w[1]);
    }
    refined
}

fn windowed_lp_with_table(
    radii: &[f64],
    absv: &[f64],
    rho: f64,
    p: f64,
    table: &WindowTable,
    norm_scale: f64,
) -> f64 {
    let rad = table.radius;
    let scale_p = norm_scale.powf(p);
    if rho < 1e-9 * rad.max(1.0) {
        // centered window: plain spherical integral over the ball
        let segs = segments(radii, 0.0, rad, &[], rad / 16.0);
        let mut acc = 0.0;
        for w in segs.windows(2) {
            acc += gl4(w[0], w[1], |s| {
                let f = interp_abs(radii, absv, s);
                let wv = table_density(table, s);
                4.0 * std::f64::consts::PI * s * s * f.powf(p) * wv
            });
        }
        return (scale_p * acc).powf(1.0 / p);
    }
    let lo = (rho - rad).max(0.0);
    let hi = rho + rad;
    let kinks = [rho, (rad - rho).abs(), rho - rad, rho + rad];
    let segs = segments(radii, lo, hi, &kinks, rad / 16.0);
    let mut acc = 0.0;
    for w in segs.windows(2) {
        acc += gl4(w[0], w[1], |s| {
            let f = interp_abs(radii, absv, s);
            if f == 0.0 {
                return 0.0;
            }
            let d_min = (s - rho).abs();
            let d_max = (s + rho).min(rad);
            if d_max <= d_min {
                return 0.0;
            }
            let cap = table.g(d_max) - table.g(d_min);
            (2.0 * std::f64::consts::PI * s / rho) * f.powf(p) * cap
        });
    }
    (scale_p * acc).powf(1.0 / p)
}

/// Derivative of the cumulative table: `w(s)^p s`, used on the centered branch.
fn table_density(table: &WindowTable, s: f64) -> f64 {
    // finite difference of the cumulative table; the table is dense enough
    // that this stays within quadrature error
    let h = table.step;
    let a = table.g((s - 0.5 * h).max(0.0));
    let b = table.g(s + 0.5 * h);
    ((b - a) / h / s.max(1e-300)).max(0.0)
}

/// `L^p` norm of `|profile| . tau_y phi` over the window ball at distance
/// `rho = |y|`, by the exact spherical-cap reduction for radial profiles.
pub fn windowed_lp_radial(
    profile: &RadialProfile,
    center_distance: f64,
    p: ExtendedRational,
    window: &Window,
) -> Result<f64, AmalgamError> {
    if profile.dimension != 3 {
        return Err(AmalgamError::Domain("radial norms require dimension 3".into()));
    }
    if !(center_distance >= 0.0) {
        return Err(AmalgamError::Domain(format!(
            "center distance must be nonnegative, got {center_distance}"
        )));
    }
    let pf = positive_exponent("p", p)?;
    let absv = profile.abs_values();
    let scale = window.normalization_radial();
    if pf.is_infinite() {
        // sup over the ball: the window profile decreases radially, so the
        // best angle realizes the minimal distance |s - rho|
        let lo = (center_distance - window.support_radius).max(0.0);
        let hi = center_distance + window.support_radius;
        let segs = segments(&profile.radii, lo, hi, &[center_distance], window.support_radius / 64.0);
        let mut sup = 0.0f64;
        for &s in &segs {
            let f = interp_abs(&profile.radii, &absv, s);
            let w = scale * window.raw_value((s - center_distance).abs());
            sup = sup.max(f * w);
        }
        return Ok(sup);
    }
    let table = WindowTable::build(window.support_radius, pf, |u| window.raw_value(u));
    Ok(windowed_lp_with_table(&profile.radii, &absv, center_distance, pf, &table, scale))
}

/// Radial amalgam norm
/// `( 4 pi Int_0^inf g(rho)^q rho^2 drho )^{1/q}` with
/// `g(rho) = ||f tau_y phi||_{L^p}` at `|y| = rho`, truncated where the
/// profile support ends.
pub fn amalgam_norm_radial(
    profile: &RadialProfile,
    inner_p: ExtendedRational,
    outer_q: ExtendedRational,
    window: &Window,
) -> Result<f64, AmalgamError> {
    if profile.dimension != 3 {
        return Err(AmalgamError::Domain("radial norms require dimension 3".into()));
    }
    let pf = positive_exponent("inner exponent", inner_p)?;
    let qf = positive_exponent("outer exponent", outer_q)?;
    if pf.is_infinite() {
        return Err(AmalgamError::Domain("inner exponent must be finite for the radial norm".into()));
    }
    let absv = profile.abs_values();
    let scale = window.normalization_radial();
    let table = WindowTable::build(window.support_radius, pf, |u| window.raw_value(u));
    let rho_max = profile.r_max() + window.support_radius;
    let rho_step = profile.median_step().max(window.support_radius / 64.0);
    let count = (rho_max / rho_step).ceil() as usize;
    let g: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|i| {
            let rho = (i as f64 + 0.5) * rho_step;
            windowed_lp_with_table(&profile.radii, &absv, rho, pf, &table, scale)
        })
        .collect();
    if qf.is_infinite() {
        return Ok(g.iter().copied().fold(0.0, f64::max));
    }
    let terms: Vec<f64> = g
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let rho = (i as f64 + 0.5) * rho_step;
            4.0 * std::f64::consts::PI * v.powf(qf) * rho * rho * rho_step
        })
        .collect();
    Ok(pairwise_sum(&terms).powf(1.0 / qf))
}

/// Mass of `|f|^p` over the unit-width annulus `max(0, rho-1) <= s <= rho+1`:
/// `Int |f(s)|^p 4 pi s^2 ds`.
pub fn annulus_mass(
    profile: &RadialProfile,
    rho: f64,
    p: ExtendedRational,
) -> Result<f64, AmalgamError> {
    if profile.dimension != 3 {
        return Err(AmalgamError::Domain("annulus mass requires dimension 3".into()));
    }
    let pf = positive_exponent("p", p)?;
    if pf.is_infinite() {
        return Err(AmalgamError::Domain("annulus mass requires finite p".into()));
    }
    let absv = profile.abs_values();
    let lo = (rho - 1.0).max(0.0);
    let hi = rho + 1.0;
    let segs = segments(&profile.radii, lo, hi, &[], 1.0 / 16.0);
    let mut acc = 0.0;
    for w in segs.windows(2) {
        acc += gl4(w[0], w[1], |s| {
            let f = interp_abs(&profile.radii, &absv, s);
            4.0 * std::f64::consts::PI * s * s * f.powf(pf)
        });
    }
    Ok(acc)
}

/// Annulus surrogate for the radial amalgam norm: with
/// `ratio = outer_q / inner_p` and `I(rho)` the annulus mass,
///
/// ```text
/// A = Int_{rho <= 1} I(rho)^ratio dy,
/// B = Int_{rho >= 1} (rho^{-2} I(rho))^ratio dy,
/// ```
///
/// both reduced radially with weight `4 pi rho^2`; returns `(A+B)^{1/outer_q}`.
/// The `rho^{-2}` factor is the unit-ball multiplicity of the annulus at
/// distance `rho` in three dimensions.
pub fn amalgam_surrogate_radial(
    profile: &RadialProfile,
    inner_p: ExtendedRational,
    outer_q: ExtendedRational,
) -> Result<f64, AmalgamError> {
    let pf = positive_exponent("inner exponent", inner_p)?;
    let qf = positive_exponent("outer exponent", outer_q)?;
    if pf.is_infinite() || qf.is_infinite() {
        return Err(AmalgamError::Domain("surrogate requires finite exponents".into()));
    }
    let ratio = qf / pf;
    let rho_max = profile.r_max() + 1.0;
    let rho_step = profile.median_step().max(1.0 / 64.0);
    let count = (rho_max / rho_step).ceil() as usize;
    let masses: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|i| {
            let rho = (i as f64 + 0.5) * rho_step;
            annulus_mass(profile, rho, inner_p).unwrap_or(0.0)
        })
        .collect();
    let terms: Vec<f64> = masses
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let rho = (i as f64 + 0.5) * rho_step;
            let integrand = if rho <= 1.0 { m.powf(ratio) } else { (m / (rho * rho)).powf(ratio) };
            4.0 * std::f64::consts::PI * integrand * rho * rho * rho_step
        })
        .collect();
    Ok(pairwise_sum(&terms).powf(1.0 / qf))
}

/// Space-time field sampled on a uniform `(x, t)` grid, row-major in `t`.
#[derive(Debug, Clone)]
pub struct SpaceTimeField {
    pub values: Vec<Complex64>,
    pub nx: usize,
    pub nt: usize,
    pub x_start: f64,
    pub x_step: f64,
    pub t_start: f64,
    pub t_step: f64,
}

impl SpaceTimeField {
    pub fn new(
        values: Vec<Complex64>,
        nx: usize,
        nt: usize,
        x_start: f64,
        x_step: f64,
        t_start: f64,
        t_step: f64,
    ) -> Result<Self, AmalgamError> {
        if values.len() != nx * nt || nx == 0 || nt == 0 {
            return Err(AmalgamError::GridMismatch(format!(
                "expected nx*nt = {} values, got {}",
                nx * nt,
                values.len()
            )));
        }
        Ok(Self { values, nx, nt, x_start, x_step, t_start, t_step })
    }

    fn row(&self, it: usize) -> &[Complex64] {
        &self.values[it * self.nx..(it + 1) * self.nx]
    }

    fn grids_match(&self, other: &Self) -> bool {
        self.nx == other.nx
            && self.nt == other.nt
            && (self.x_start - other.x_start).abs() < 1e-12
            && (self.x_step - other.x_step).abs() < 1e-12
            && (self.t_start - other.t_start).abs() < 1e-12
            && (self.t_step - other.t_step).abs() < 1e-12
    }
}

/// Mixed amalgam norm `W(q~, q)_t W(r~, r)_x` of a 1+1 dimensional field:
/// the spatial amalgam norm per time slice, then the time amalgam norm of
/// the resulting scalar signal.
pub fn mixed_norm_1d(
    field: &SpaceTimeField,
    q_tilde: ExtendedRational,
    q: ExtendedRational,
    r_tilde: ExtendedRational,
    r: ExtendedRational,
    window: &Window,
) -> Result<f64, AmalgamError> {
    let h: Result<Vec<f64>, AmalgamError> = (0..field.nt)
        .map(|it| {
            let sig = SampledSignal::new(field.row(it).to_vec(), field.x_start, field.x_step)?;
            amalgam_norm_1d(&sig, r_tilde, r, window, false)
        })
        .collect();
    let h = SampledSignal::real(h?, field.t_start, field.t_step)?;
    amalgam_norm_1d(&h, q_tilde, q, window, false)
}

/// `|<F, G>| / (||F||_{W(q~,q)W(r~,r)} ||G||_{W(q~',q')W(r~',r')})` for the
/// tuple's primal indices and their exact conjugates.
pub fn holder_pairing_ratio(
    f: &SpaceTimeField,
    g: &SpaceTimeField,
    tuple: &ExponentTuple,
    window: &Window,
) -> Result<f64, AmalgamError> {
    if !f.grids_match(g) {
        return Err(AmalgamError::GridMismatch("pairing fields must share the grid".into()));
    }
    let mut pairing = Complex64::new(0.0, 0.0);
    for (a, b) in f.values.iter().zip(&g.values) {
        pairing += a * b.conj();
    }
    pairing *= Complex64::new(f.x_step * f.t_step, 0.0);
    let norm_f = mixed_norm_1d(f, tuple.q_tilde, tuple.q, tuple.r_tilde, tuple.r, window)?;
    let (qt_c, q_c, rt_c, r_c) = tuple.conjugate_indices();
    let norm_g = mixed_norm_1d(g, qt_c, q_c, rt_c, r_c, window)?;
    let denom = norm_f * norm_g;
    if denom == 0.0 {
        if pairing.norm() == 0.0 {
            return Ok(0.0);
        }
        return Err(AmalgamError::Domain("zero norm with nonzero pairing".into()));
    }
    Ok(pairing.norm() / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ExtendedRational, Infinity};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn constant_profile(value: f64, r_max: f64, points: usize) -> RadialProfile {
        RadialProfile::sample_midpoints(r_max, points, |_| Complex64::new(value, 0.0)).unwrap()
    }

    #[test]
    fn weak_lorentz_examples() {
        // indicator of N lattice points, step 1, q = 2 -> sqrt(N)
        let n = 16usize;
        let sig = SampledSignal::real(vec![1.0; n], 0.0, 1.0).unwrap();
        assert_relative_eq!(
            weak_lorentz_norm(&sig, rat(2, 1)).unwrap(),
            (n as f64).sqrt(),
            max_relative = 1e-14
        );
        // f(k) = k^{-1/2} stays bounded independently of N
        for n in [100usize, 1000, 10000] {
            let vals: Vec<f64> = (1..=n).map(|k| 1.0 / (k as f64).sqrt()).collect();
            let sig = SampledSignal::real(vals, 0.0, 1.0).unwrap();
            let norm = weak_lorentz_norm(&sig, rat(2, 1)).unwrap();
            assert!(norm <= 1.0 + 1e-12, "N={n}: {norm}");
            assert!(norm >= 0.99);
        }
        // zero signal
        let zero = SampledSignal::real(vec![0.0; 8], 0.0, 1.0).unwrap();
        assert_eq!(weak_lorentz_norm(&zero, rat(2, 1)).unwrap(), 0.0);
        // negative values rejected
        let neg = SampledSignal::real(vec![-1.0], 0.0, 1.0).unwrap();
        assert!(weak_lorentz_norm(&neg, rat(2, 1)).is_err());
        assert!(weak_lorentz_norm(&zero, rat(0, 1)).is_err());
    }

    #[test]
    fn weak_norm_dominated_by_strong() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.gen_range(5..200);
            let vals: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..3.0)).collect();
            let sig = SampledSignal::real(vals.clone(), 0.0, 0.25).unwrap();
            for q in [rat(1, 1), rat(2, 1), rat(9, 2), rat(30, 1)] {
                let weak = weak_lorentz_norm(&sig, q).unwrap();
                let strong: f64 = vals
                    .iter()
                    .map(|v| v.powf(q.to_f64()) * 0.25)
                    .sum::<f64>()
                    .powf(1.0 / q.to_f64());
                assert!(weak <= strong * (1.0 + 1e-12), "q={q}: {weak} vs {strong}");
            }
        }
    }

    #[test]
    fn amalgam_1d_zero_and_gaussian() {
        let zero = SampledSignal::real(vec![0.0; 64], -8.0, 0.25).unwrap();
        let w = Window::default();
        assert_eq!(amalgam_norm_1d(&zero, rat(2, 1), rat(2, 1), &w, false).unwrap(), 0.0);

        // Gaussian, p = q = 2: equivalent to L^2 within the frozen window factor
        let step = 1.0 / 64.0;
        let vals: Vec<f64> = (0..1536).map(|i| (-(-12.0 + i as f64 * step).powi(2)).exp()).collect();
        let sig = SampledSignal::real(vals.clone(), -12.0, step).unwrap();
        let w22 = amalgam_norm_1d(&sig, rat(2, 1), rat(2, 1), &w, false).unwrap();
        let l2 = (vals.iter().map(|v| v * v * step).sum::<f64>()).sqrt();
        let ratio = w22 / l2;
        assert!(ratio > 1.0 / 1.5 && ratio < 1.5, "ratio {ratio}");
    }

    #[test]
    fn amalgam_1d_infinite_outer() {
        let sig = SampledSignal::real(vec![1.0; 128], 0.0, 0.125).unwrap();
        let w = Window::cosine();
        let sup = amalgam_norm_1d(&sig, rat(2, 1), Infinity, &w, false).unwrap();
        // each window sees L^2 mass at most ||phi||_2 = 1
        assert!(sup <= 1.0 + 1e-9 && sup > 0.5, "{sup}");
    }

    #[test]
    fn windowed_radial_ball_geometry() {
        // flat window table (phi == 1): recovers plain ball integrals
        let profile = constant_profile(1.0, 16.0, 2048);
        let absv = profile.abs_values();
        let table = WindowTable::build(1.0, 1.0, |_| 1.0);
        let ball = windowed_lp_with_table(&profile.radii, &absv, 0.0, 1.0, &table, 1.0);
        assert_relative_eq!(ball, 4.0 * std::f64::consts::PI / 3.0, max_relative = 1e-2);
        let translated = windowed_lp_with_table(&profile.radii, &absv, 10.0, 1.0, &table, 1.0);
        assert_relative_eq!(translated, ball, max_relative = 1e-6);
    }

    #[test]
    fn windowed_radial_far_field_midpoint() {
        // |x|^{-1} at distance 10 with an L^2-normalized window:
        // ~ rho^{-1} ||phi||_2 = 0.1. Monte Carlo oracle (1e6 points, seeded).
        let profile =
            RadialProfile::sample_midpoints(16.0, 4096, |r| Complex64::new(1.0 / r, 0.0)).unwrap();
        let w = Window::default();
        let got = windowed_lp_radial(&profile, 10.0, rat(2, 1), &w).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let scale = w.normalization_radial();
        let mut acc = 0.0;
        let n = 1_000_000;
        for _ in 0..n {
            // uniform point in the unit ball around (10, 0, 0)
            let (x, y, z) = loop {
                let x = rng.gen_range(-1.0..1.0);
                let y = rng.gen_range(-1.0..1.0);
                let z = rng.gen_range(-1.0..1.0);
                if x * x + y * y + z * z <= 1.0 {
                    break (x, y, z);
                }
            };
            let d = (x * x + y * y + z * z as f64).sqrt();
            let s = ((10.0 + x) * (10.0 + x) + y * y + z * z).sqrt();
            let f = 1.0 / s;
            let phi = scale * w.raw_value(d);
            acc += (f * phi).powi(2);
        }
        let volume = 4.0 * std::f64::consts::PI / 3.0;
        let mc = (acc / n as f64 * volume).sqrt();
        assert_relative_eq!(got, mc, max_relative = 0.01);
        assert_relative_eq!(got, 0.1, max_relative = 0.1);
    }

    #[test]
    fn annulus_mass_examples() {
        let unit = constant_profile(1.0, 16.0, 2048);
        let v = annulus_mass(&unit, 0.0, rat(1, 1)).unwrap();
        assert_relative_eq!(v, 4.0 * std::f64::consts::PI / 3.0, max_relative = 1e-3);
        let shell = annulus_mass(&unit, 10.0, rat(1, 1)).unwrap();
        let expected = 4.0 * std::f64::consts::PI / 3.0 * (11.0f64.powi(3) - 9.0f64.powi(3));
        assert_relative_eq!(shell, expected, max_relative = 1e-3);

        let inv_sq =
            RadialProfile::sample_midpoints(16.0, 8192, |r| Complex64::new(r.powi(-2), 0.0))
                .unwrap();
        let mass = annulus_mass(&inv_sq, 10.0, rat(1, 1)).unwrap();
        assert_relative_eq!(mass, 8.0 * std::f64::consts::PI, max_relative = 1e-3);
    }

    #[test]
    fn radial_norm_zero_and_homogeneity() {
        let w = Window::default();
        let zero = constant_profile(0.0, 8.0, 512);
        assert_eq!(
            amalgam_norm_radial(&zero, rat(12, 5), rat(9, 4), &w).unwrap(),
            0.0
        );
        let profile =
            RadialProfile::sample_midpoints(8.0, 512, |r| Complex64::new((-r * r).exp(), r.sin() * 0.2))
                .unwrap();
        let base = amalgam_norm_radial(&profile, rat(12, 5), rat(9, 4), &w).unwrap();
        let scaled = RadialProfile::new(
            profile.radii.clone(),
            profile.values.iter().map(|v| v * 3.5).collect(),
        )
        .unwrap();
        let scaled_norm = amalgam_norm_radial(&scaled, rat(12, 5), rat(9, 4), &w).unwrap();
        assert_relative_eq!(scaled_norm, 3.5 * base, max_relative = 1e-12);

        let surro = amalgam_surrogate_radial(&profile, rat(12, 5), rat(9, 4)).unwrap();
        let surro_scaled = amalgam_surrogate_radial(&scaled, rat(12, 5), rat(9, 4)).unwrap();
        assert_relative_eq!(surro_scaled, 3.5 * surro, max_relative = 1e-12);
    }

    #[test]
    fn surrogate_constant_profile_structure() {
        // compactly supported constant: A and B finite, B dominated by rho <= 3
        let profile = constant_profile(1.0, 2.0, 256);
        let total = amalgam_surrogate_radial(&profile, rat(2, 1), rat(2, 1)).unwrap();
        assert!(total.is_finite() && total > 0.0);
        // annulus mass vanishes once rho - 1 > 2
        assert_eq!(annulus_mass(&profile, 3.5, rat(2, 1)).unwrap(), 0.0);
    }

    #[test]
    fn holder_cauchy_schwarz_equality_case() {
        // F = G Gaussian field, all exponents 2: ratio close to 1
        let nx = 256;
        let nt = 96;
        let (x0, dx) = (-8.0, 16.0 / nx as f64);
        let (t0, dt) = (-6.0, 12.0 / nt as f64);
        let mut values = Vec::with_capacity(nx * nt);
        for it in 0..nt {
            let t = t0 + it as f64 * dt;
            for ix in 0..nx {
                let x = x0 + ix as f64 * dx;
                values.push(Complex64::new((-0.3 * (x * x + t * t)).exp(), 0.0));
            }
        }
        let f = SpaceTimeField::new(values, nx, nt, x0, dx, t0, dt).unwrap();
        let tuple = ExponentTuple::new(2, rat(0, 1), rat(2, 1), rat(2, 1), rat(2, 1), rat(2, 1))
            .unwrap();
        let w = Window::cosine();
        let ratio = holder_pairing_ratio(&f, &f, &tuple, &w).unwrap();
        assert!((ratio - 1.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn holder_inequality_random_fields() {
        let nx = 128;
        let nt = 64;
        let (x0, dx) = (-6.0, 12.0 / nx as f64);
        let (t0, dt) = (-4.0, 8.0 / nt as f64);
        let tuple = ExponentTuple::new(3, rat(4, 5), rat(3, 1), rat(30, 1), rat(24, 5), rat(9, 2))
            .unwrap();
        let w = Window::cosine();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..50 {
            let mk = |rng: &mut ChaCha8Rng| {
                let cx = rng.gen_range(-2.0..2.0);
                let ct = rng.gen_range(-1.0..1.0);
                let sx = rng.gen_range(0.4..1.5);
                let st = rng.gen_range(0.4..1.5);
                let amp = rng.gen_range(0.2..2.0);
                let mut values = Vec::with_capacity(nx * nt);
                for it in 0..nt {
                    let t = t0 + it as f64 * dt;
                    for ix in 0..nx {
                        let x = x0 + ix as f64 * dx;
                        let env =
                            (-(x - cx).powi(2) / sx - (t - ct).powi(2) / st).exp() * amp;
                        values.push(Complex64::new(env * (3.0 * x).cos(), env * (2.0 * t).sin()));
                    }
                }
                SpaceTimeField::new(values, nx, nt, x0, dx, t0, dt).unwrap()
            };
            let f = mk(&mut rng);
            let g = mk(&mut rng);
            let ratio = holder_pairing_ratio(&f, &g, &tuple, &w).unwrap();
            assert!(ratio <= 1.1, "trial {trial}: ratio {ratio}");
        }
    }

    #[test]
    fn holder_zero_field() {
        let nx = 32;
        let nt = 16;
        let f = SpaceTimeField::new(
            vec![Complex64::new(1.0, 0.0); nx * nt],
            nx,
            nt,
            0.0,
            0.25,
            0.0,
            0.25,
        )
        .unwrap();
        let zero =
            SpaceTimeField::new(vec![Complex64::new(0.0, 0.0); nx * nt], nx, nt, 0.0, 0.25, 0.0, 0.25)
                .unwrap();
        let tuple =
            ExponentTuple::new(2, rat(0, 1), rat(2, 1), rat(2, 1), rat(2, 1), rat(2, 1)).unwrap();
        let ratio = holder_pairing_ratio(&f, &zero, &tuple, &Window::cosine()).unwrap();
        assert_eq!(ratio, 0.0);
        // mismatched grids
        let other = SpaceTimeField::new(
            vec![Complex64::new(0.0, 0.0); nx * nt],
            nx,
            nt,
            0.5,
            0.25,
            0.0,
            0.25,
        )
        .unwrap();
        assert!(holder_pairing_ratio(&f, &other, &tuple, &Window::cosine()).is_err());
    }

    #[test]
    fn inclusion_direction_family() {
        // p0 >= p1, q0 <= q1: || . ||_{W(p1,q1)} / || . ||_{W(p0,q0)} stays
        // bounded across the test family; the constant is frozen here.
        let w = Window::default();
        let step = 1.0 / 32.0;
        let family: Vec<Vec<f64>> = {
            let xs: Vec<f64> = (0..1024).map(|i| -16.0 + i as f64 * step).collect();
            let mut fam: Vec<Vec<f64>> = Vec::new();
            for width in [0.3, 1.0, 3.0, 8.0] {
                fam.push(xs.iter().map(|x| (-x * x / width).exp()).collect());
            }
            for cut in [0.5, 2.0, 6.0] {
                fam.push(xs.iter().map(|x| if x.abs() < cut { 1.0 } else { 0.0 }).collect());
            }
            for j in [1.0f64, 2.0, 3.0] {
                fam.push(
                    xs.iter()
                        .map(|x| {
                            (0..5)
                                .map(|m| 0.5f64.powi(m) * ((2.0f64.powi(m) * j * x).cos()))
                                .sum::<f64>()
                                * (-x * x / 9.0).exp()
                        })
                        .map(f64::abs)
                        .collect(),
                );
            }
            fam
        };
        let mut worst: f64 = 0.0;
        for vals in &family {
            let sig = SampledSignal::real(vals.clone(), -16.0, step).unwrap();
            let tight = amalgam_norm_1d(&sig, rat(4, 1), rat(2, 1), &w, false).unwrap();
            let loose = amalgam_norm_1d(&sig, rat(2, 1), rat(4, 1), &w, false).unwrap();
            if tight > 0.0 {
                worst = worst.max(loose / tight);
            }
        }
        // frozen on first run; the discrete inclusion constant for the
        // default window and (4,2) -> (2,4)
        assert!(worst <= 2.6, "inclusion ratio drifted: {worst}");
    }

    #[test]
    fn w_pp_equivalent_to_lp() {
        let w = Window::default();
        let step = 1.0 / 32.0;
        let xs: Vec<f64> = (0..1024).map(|i| -16.0 + i as f64 * step).collect();
        let mut ratios = Vec::new();
        for width in [0.4, 1.0, 2.5, 7.0] {
            let vals: Vec<f64> = xs.iter().map(|x| (-x * x / width).exp()).collect();
            let sig = SampledSignal::real(vals.clone(), -16.0, step).unwrap();
            for p in [rat(2, 1), rat(4, 1)] {
                let wpp = amalgam_norm_1d(&sig, p, p, &w, false).unwrap();
                let lp = vals
                    .iter()
                    .map(|v| v.powf(p.to_f64()) * step)
                    .sum::<f64>()
                    .powf(1.0 / p.to_f64());
                ratios.push(wpp / lp);
            }
        }
        for r in &ratios {
            assert!(*r > 1.0 / 1.6 && *r < 1.6, "W(p,p)/L^p ratio {r}");
        }
    }

    #[test]
    fn weak_outer_variant_runs() {
        let step = 1.0 / 16.0;
        let vals: Vec<f64> =
            (0..2048).map(|i| 1.0 / (1.0 + (i as f64 * step)).powf(0.6)).collect();
        let sig = SampledSignal::real(vals, 0.0, step).unwrap();
        let w = Window::default();
        let weak = amalgam_norm_1d(&sig, rat(2, 1), rat(2, 1), &w, true).unwrap();
        let strong = amalgam_norm_1d(&sig, rat(2, 1), rat(2, 1), &w, false).unwrap();
        assert!(weak > 0.0 && weak <= strong * (1.0 + 1e-12));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn homogeneity_1d(lambda in 0.1f64..10.0, seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vals: Vec<f64> = (0..200).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let sig = SampledSignal::real(vals.clone(), -3.0, 0.03).unwrap();
            let scaled = SampledSignal::real(vals.iter().map(|v| v * lambda).collect(), -3.0, 0.03).unwrap();
            let w = Window::default();
            for (p, q) in [(rat(2,1), rat(2,1)), (rat(12,5), rat(9,4)), (rat(1,1), rat(4,1))] {
                let a = amalgam_norm_1d(&sig, p, q, &w, false).unwrap();
                let b = amalgam_norm_1d(&scaled, p, q, &w, false).unwrap();
                prop_assert!((b - lambda * a).abs() <= 1e-9 * (1.0 + b.abs()));
            }
        }
    }
}
