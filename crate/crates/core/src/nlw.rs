//! Radial wave evolution in three dimensions and the semilinear fixed point.
//!
//! A radial field `u(|x|)` on the ball of radius `L` reduces through
//! `v(r) = r u(r)` to a one-dimensional Dirichlet problem on `[0, L]`
//! (`v(0) = 0` enforces regularity at the origin). The discrete sine
//! transform diagonalizes the Laplacian on that grid, so every propagator is
//! a mode-wise multiplier:
//!
//! * `e^{it sqrt(-Lap)}`            -> `e^{i t w_m}`
//! * `cos(t sqrt(-Lap))`            -> `cos(t w_m)`
//! * `sin(t sqrt(-Lap))/sqrt(-Lap)` -> `sin(t w_m)/w_m`
//!
//! with `w_m = pi m / L`. The Duhamel integral is computed per mode by a
//! Filon rule: the forcing spectrum is taken piecewise linear on the stored
//! time slices while the oscillatory factor is integrated exactly, which
//! keeps high modes from being under-resolved by the slice spacing.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rustfft::{Fft, FftPlanner};
use thiserror::Error;

use crate::amalgam::{amalgam_norm_1d, amalgam_norm_radial, AmalgamError, RadialProfile, SampledSignal, Window};
use crate::rational::ExtendedRational;
use crate::regions::{life_span, nlw_admissible, ContractionPlan, ExponentTuple, RegionsError};

#[derive(Debug, Error)]
pub enum NlwError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("aliasing: {0}")]
    Aliasing(String),
    #[error("fixed-point map is not contracting (ratio {0})")]
    NonContraction(f64),
    #[error("iteration failed to converge within {0} steps")]
    NonConvergence(usize),
    #[error(transparent)]
    Amalgam(#[from] AmalgamError),
    #[error(transparent)]
    Regions(#[from] RegionsError),
}

/// Displacement and velocity at a fixed time.
#[derive(Debug, Clone)]
pub struct RadialState {
    pub u: RadialProfile,
    pub ut: RadialProfile,
    pub time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonlinearityForm {
    /// `u^k`, integer `k` only.
    Power,
    /// `|u|^{k-1} u`.
    SignedPower,
}

/// Power nonlinearity `F_k(u) = sign * u^k` or `sign * |u|^{k-1} u`.
#[derive(Debug, Clone, Copy)]
pub struct Nonlinearity {
    pub k: ExtendedRational,
    pub form: NonlinearityForm,
    pub sign: f64,
}

impl Nonlinearity {
    pub fn new(k: ExtendedRational, form: NonlinearityForm, sign: f64) -> Result<Self, NlwError> {
        if k <= ExtendedRational::one() || k.is_infinite() {
            return Err(NlwError::Domain(format!("nonlinearity power must exceed 1, got {k}")));
        }
        if form == NonlinearityForm::Power && k.denom() != Some(1) {
            return Err(NlwError::Domain(format!(
                "the plain power form needs an integer exponent, got {k}"
            )));
        }
        if sign != 1.0 && sign != -1.0 {
            return Err(NlwError::Domain(format!("sign must be +1 or -1, got {sign}")));
        }
        Ok(Self { k, form, sign })
    }

    pub fn apply(&self, u: Complex64) -> Complex64 {
        let kf = self.k.to_f64();
        match self.form {
            NonlinearityForm::Power => {
                let mut acc = Complex64::new(self.sign, 0.0);
                for _ in 0..self.k.numer().unwrap() {
                    acc *= u;
                }
                acc
            }
            NonlinearityForm::SignedPower => {
                let m = u.norm();
                if m == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    u * m.powf(kf - 1.0) * self.sign
                }
            }
        }
    }
}

static FFT_PLANS: Lazy<Mutex<HashMap<usize, Arc<dyn Fft<f64>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn fft_plan(len: usize) -> Arc<dyn Fft<f64>> {
    let mut plans = FFT_PLANS.lock().unwrap();
    plans
        .entry(len)
        .or_insert_with(|| FftPlanner::new().plan_fft_forward(len))
        .clone()
}

/// Type-I discrete sine transform of a complex vector of length `N-1`:
/// `out_m = sum_j in_j sin(pi j m / N)`. Applying it twice multiplies by `N/2`.
pub fn dst_i(input: &[Complex64]) -> Vec<Complex64> {
    let n = input.len() + 1;
    let mut buf = vec![Complex64::new(0.0, 0.0); 2 * n];
    for (j, v) in input.iter().enumerate() {
        buf[j + 1] = *v;
        buf[2 * n - 1 - j] = -*v;
    }
    fft_plan(2 * n).process(&mut buf);
    // FFT[m] = -2i DST_m
    (1..n).map(|m| buf[m] * Complex64::new(0.0, 0.5)).collect()
}

/// Uniform radial grid `r_j = j h`, `j = 1..N-1`, of a profile; errors when
/// the grid is not of that form.
fn uniform_step(profile: &RadialProfile) -> Result<f64, NlwError> {
    let h = profile.radii[0];
    if !(h > 0.0) {
        return Err(NlwError::Domain("spectral grid must start at r = h > 0".into()));
    }
    for (j, &r) in profile.radii.iter().enumerate() {
        let expected = (j as f64 + 1.0) * h;
        if (r - expected).abs() > 1e-9 * expected.max(1.0) {
            return Err(NlwError::Domain(format!(
                "spectral operations need the uniform grid j*h; sample {j} is {r}, expected {expected}"
            )));
        }
    }
    Ok(h)
}

struct SpectralContext {
    step: f64,
    modes: usize,       // N - 1 interior points
    domain_radius: f64, // L = N h
}

impl SpectralContext {
    fn from_profile(profile: &RadialProfile) -> Result<Self, NlwError> {
        let step = uniform_step(profile)?;
        let modes = profile.values.len();
        let domain_radius = (modes as f64 + 1.0) * step;
        Ok(Self { step, modes, domain_radius })
    }

    fn omega(&self, m: usize) -> f64 {
        std::f64::consts::PI * (m as f64 + 1.0) / self.domain_radius
    }

    /// Forward transform of `v = r u`.
    fn analyze(&self, profile: &RadialProfile) -> Vec<Complex64> {
        let v: Vec<Complex64> = profile
            .values
            .iter()
            .zip(&profile.radii)
            .map(|(u, r)| u * *r)
            .collect();
        dst_i(&v)
    }

    /// Inverse transform back to `u = v / r` on the same grid.
    fn synthesize(&self, spectrum: &[Complex64], radii: &[f64]) -> RadialProfile {
        let n = self.modes as f64 + 1.0;
        let v = dst_i(spectrum);
        let values: Vec<Complex64> = v
            .iter()
            .zip(radii)
            .map(|(vj, r)| vj * (2.0 / n) / r)
            .collect();
        RadialProfile::new(radii.to_vec(), values).expect("synthesized grid is valid")
    }
}

fn peak(profile: &RadialProfile) -> f64 {
    profile.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn check_edge_decay(profile: &RadialProfile) -> Result<(), NlwError> {
    let p = peak(profile);
    if p == 0.0 {
        return Ok(());
    }
    let tail = profile.values.iter().rev().take(4).map(|v| v.norm()).fold(0.0, f64::max);
    if tail > 1e-8 * p {
        return Err(NlwError::Domain(format!(
            "profile has not decayed at the grid edge (tail/peak = {:.2e})",
            tail / p
        )));
    }
    Ok(())
}

/// L2 mass fraction in the outer band of the grid, the aliasing monitor.
fn edge_mass_fraction(profile: &RadialProfile) -> f64 {
    let n = profile.values.len();
    let band = (n / 100).max(4);
    let total: f64 = profile
        .values
        .iter()
        .zip(&profile.radii)
        .map(|(v, r)| v.norm_sqr() * r * r)
        .sum();
    if total == 0.0 {
        return 0.0;
    }
    let outer: f64 = profile.values[n - band..]
        .iter()
        .zip(&profile.radii[n - band..])
        .map(|(v, r)| v.norm_sqr() * r * r)
        .sum();
    outer / total
}

/// Half-wave propagator `e^{it sqrt(-Lap)}` of a radial profile.
pub fn half_wave(profile: &RadialProfile, t: f64) -> Result<RadialProfile, NlwError> {
    let ctx = SpectralContext::from_profile(profile)?;
    check_edge_decay(profile)?;
    let mut spectrum = ctx.analyze(profile);
    for (m, c) in spectrum.iter_mut().enumerate() {
        *c *= Complex64::new(0.0, t * ctx.omega(m)).exp();
    }
    let evolved = ctx.synthesize(&spectrum, &profile.radii);
    if edge_mass_fraction(&evolved) > 1e-6 {
        return Err(NlwError::Aliasing(format!(
            "evolution to t = {t} pushed mass into the boundary band"
        )));
    }
    Ok(evolved)
}

/// Homogeneous Sobolev norm of a radial profile,
/// `( sum_m w_m^{2s} |V_m|^2 )^{1/2}` normalized so `s = 0` reproduces the
/// `L^2(R^3)` norm. Valid for `|s| < 3/2`.
pub fn sobolev_norm(profile: &RadialProfile, s: f64) -> Result<f64, NlwError> {
    if !(s.abs() < 1.5) {
        return Err(NlwError::Domain(format!(
            "radial L^2-based Sobolev norms need |s| < 3/2, got {s}"
        )));
    }
    let ctx = SpectralContext::from_profile(profile)?;
    let spectrum = ctx.analyze(profile);
    let n = ctx.modes as f64 + 1.0;
    let mut acc = 0.0;
    for (m, c) in spectrum.iter().enumerate() {
        acc += ctx.omega(m).powf(2.0 * s) * c.norm_sqr();
    }
    Ok((4.0 * std::f64::consts::PI * ctx.step * (2.0 / n) * acc).sqrt())
}

/// Filon increments over `[a, a + delta]`:
/// `(I0c, I1c, I0s, I1s) = (Int cos, Int u cos, Int sin, Int u sin)`
/// of `cos/sin((a+u) w) du`, exact in the oscillation.
fn filon_increments(w: f64, a: f64, delta: f64) -> (f64, f64, f64, f64) {
    let x = delta * w;
    if x.abs() < 1e-4 {
        let (sa, ca) = (a * w).sin_cos();
        let d2 = delta * delta;
        let d3 = d2 * delta;
        let i0c = delta * ca - d2 * w * sa / 2.0 - d3 * w * w * ca / 6.0;
        let i1c = d2 / 2.0 * ca - d3 * w / 3.0 * sa;
        let i0s = delta * sa + d2 * w * ca / 2.0 - d3 * w * w * sa / 6.0;
        let i1s = d2 / 2.0 * sa + d3 * w / 3.0 * ca;
        return (i0c, i1c, i0s, i1s);
    }
    let (sa, ca) = (a * w).sin_cos();
    let (sb, cb) = ((a + delta) * w).sin_cos();
    let i0c = (sb - sa) / w;
    let i1c = delta * sb / w + (cb - ca) / (w * w);
    let i0s = (ca - cb) / w;
    let i1s = -delta * cb / w + (sb - sa) / (w * w);
    (i0c, i1c, i0s, i1s)
}

/// One Duhamel application
/// `Phi(u)(t) = cos(t sqrt(-Lap)) f + sin(t sqrt(-Lap))/sqrt(-Lap) g
///             + Int_0^t sin((t-s) sqrt(-Lap))/sqrt(-Lap) F_k(u)(s) ds`
/// on the uniform time slices carried by `u_guess` over `[0, T]`.
pub fn duhamel_apply(
    state0: &RadialState,
    u_guess: &[RadialProfile],
    nonlinearity: &Nonlinearity,
    t_final: f64,
) -> Result<Vec<RadialProfile>, NlwError> {
    if u_guess.len() < 2 {
        return Err(NlwError::Domain("need at least two time slices".into()));
    }
    if !(t_final > 0.0) {
        return Err(NlwError::Domain(format!("final time must be positive, got {t_final}")));
    }
    let ctx = SpectralContext::from_profile(&state0.u)?;
    let radii = &state0.u.radii;
    for slice in u_guess {
        if slice.radii.len() != radii.len() {
            return Err(NlwError::Domain("guess slices must share the data grid".into()));
        }
    }
    let slices = u_guess.len();
    let dt = t_final / (slices - 1) as f64;

    let f_hat = ctx.analyze(&state0.u);
    let g_hat = ctx.analyze(&state0.ut);

    // forcing spectra per slice
    let forcing: Vec<Vec<Complex64>> = u_guess
        .iter()
        .map(|slice| {
            let fk = RadialProfile::new(
                slice.radii.clone(),
                slice.values.iter().map(|&u| nonlinearity.apply(u)).collect(),
            )
            .expect("forcing grid is valid");
            ctx.analyze(&fk)
        })
        .collect();

    // cumulative Filon sums C_m(t_i) = Int_0^{t_i} cos(s w) H_m(s) ds and the
    // sine analogue; the Duhamel term is then
    // W_m(t_i) = [sin(t_i w) C_m(t_i) - cos(t_i w) S_m(t_i)] / w.
    let modes = ctx.modes;
    let mut cum_c = vec![Complex64::new(0.0, 0.0); modes];
    let mut cum_s = vec![Complex64::new(0.0, 0.0); modes];
    let mut out = Vec::with_capacity(slices);

    for i in 0..slices {
        let t = i as f64 * dt;
        if i > 0 {
            let a = (i - 1) as f64 * dt;
            for m in 0..modes {
                let w = ctx.omega(m);
                let (i0c, i1c, i0s, i1s) = filon_increments(w, a, dt);
                let h0 = forcing[i - 1][m];
                let h1 = forcing[i][m];
                let slope = (h1 - h0) / dt;
                cum_c[m] += h0 * i0c + slope * i1c;
                cum_s[m] += h0 * i0s + slope * i1s;
            }
        }
        let mut spectrum = Vec::with_capacity(modes);
        for m in 0..modes {
            let w = ctx.omega(m);
            let (st, ct) = (t * w).sin_cos();
            let linear = f_hat[m] * ct + g_hat[m] * st / w;
            let duhamel = (cum_c[m] * st - cum_s[m] * ct) / w;
            spectrum.push(linear + duhamel);
        }
        out.push(ctx.synthesize(&spectrum, radii));
    }
    Ok(out)
}

/// Result of the Picard iteration.
#[derive(Debug)]
pub struct SolveResult {
    pub solution: Vec<RadialProfile>,
    pub times: Vec<f64>,
    pub iterations: usize,
    pub contraction_ratios: Vec<f64>,
    pub plan: ContractionPlan,
    pub sigma: f64,
    pub mixed_norm: f64,
}

/// Mixed norm `W(q~, q)_t W(r~, r)_x` of a slice sequence over `[0, T]`.
pub fn mixed_norm_slices(
    slices: &[RadialProfile],
    dt: f64,
    tuple: &ExponentTuple,
    window: &Window,
) -> Result<f64, NlwError> {
    let h: Result<Vec<f64>, AmalgamError> = slices
        .iter()
        .map(|p| amalgam_norm_radial(p, tuple.r_tilde, tuple.r, window))
        .collect();
    let sig = SampledSignal::real(h?, 0.0, dt)?;
    Ok(amalgam_norm_1d(&sig, tuple.q_tilde, tuple.q, window, false)?)
}

fn diff_slices(a: &[RadialProfile], b: &[RadialProfile]) -> Vec<RadialProfile> {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            RadialProfile::new(
                x.radii.clone(),
                x.values.iter().zip(&y.values).map(|(u, v)| u - v).collect(),
            )
            .expect("difference grid is valid")
        })
        .collect()
}

const MAX_PICARD_ITERATIONS: usize = 50;
const PICARD_TOLERANCE: f64 = 1e-8;
const TIME_SLICES: usize = 65; // dt = T / 64

/// Picard iteration `u <- Phi(u)` from `u = 0` on the ball fixed by
/// [`life_span`]. Contraction ratios are measured in the mixed amalgam norm
/// and any ratio above one aborts the solve.
pub fn fixed_point_solve(
    f: &RadialProfile,
    g: &RadialProfile,
    nonlinearity: &Nonlinearity,
    tuple: &ExponentTuple,
    constant: f64,
    q0_tilde: ExtendedRational,
) -> Result<SolveResult, NlwError> {
    fixed_point_solve_with_slices(f, g, nonlinearity, tuple, constant, q0_tilde, TIME_SLICES)
}

/// [`fixed_point_solve`] with an explicit slice count, for resolution sweeps.
pub fn fixed_point_solve_with_slices(
    f: &RadialProfile,
    g: &RadialProfile,
    nonlinearity: &Nonlinearity,
    tuple: &ExponentTuple,
    constant: f64,
    q0_tilde: ExtendedRational,
    slices: usize,
) -> Result<SolveResult, NlwError> {
    if slices < 3 {
        return Err(NlwError::Domain("need at least three time slices".into()));
    }
    if !nlw_admissible(tuple, nonlinearity.k) {
        return Err(NlwError::Domain(format!(
            "tuple (q~={}, q={}, r~={}, r={}) is not admissible for k = {}",
            tuple.q_tilde, tuple.q, tuple.r_tilde, tuple.r, nonlinearity.k
        )));
    }
    // sigma is pinned by the scaling relation 1/q + 3/r = 3/2 - sigma
    let sigma = 1.5 - (tuple.q.recip().to_f64() + 3.0 * tuple.r.recip().to_f64());
    let data_norm = sobolev_norm(f, sigma)? + sobolev_norm(g, sigma - 1.0)?;
    let plan = life_span(constant, data_norm, nonlinearity.k, q0_tilde)?;
    let t_final = plan.life_span;
    let dt = t_final / (slices - 1) as f64;
    let times: Vec<f64> = (0..slices).map(|i| i as f64 * dt).collect();
    let window = Window::default();

    let state0 = RadialState { u: f.clone(), ut: g.clone(), time: 0.0 };
    let zero = RadialProfile::new(
        f.radii.clone(),
        vec![Complex64::new(0.0, 0.0); f.values.len()],
    )?;
    let mut current: Vec<RadialProfile> = vec![zero; slices];
    let mut prev_diff_norm: Option<f64> = None;
    let mut ratios = Vec::new();

    for iteration in 1..=MAX_PICARD_ITERATIONS {
        let next = duhamel_apply(&state0, &current, nonlinearity, t_final)?;
        let diff = diff_slices(&next, &current);
        let diff_norm = mixed_norm_slices(&diff, dt, tuple, &window)?;
        if let Some(prev) = prev_diff_norm {
            if prev > 0.0 {
                let theta = diff_norm / prev;
                if theta > 1.0 {
                    return Err(NlwError::NonContraction(theta));
                }
                ratios.push(theta);
            }
        }
        current = next;
        if diff_norm <= PICARD_TOLERANCE {
            let mixed_norm = mixed_norm_slices(&current, dt, tuple, &window)?;
            return Ok(SolveResult {
                solution: current,
                times,
                iterations: iteration,
                contraction_ratios: ratios,
                plan,
                sigma,
                mixed_norm,
            });
        }
        prev_diff_norm = Some(diff_norm);
    }
    Err(NlwError::NonConvergence(MAX_PICARD_ITERATIONS))
}

/// Sup-in-time Sobolev diagnostics of a solved trajectory.
#[derive(Debug, Clone, Copy)]
pub struct PersistenceReport {
    pub sup_hsigma: f64,
    pub sup_hsigma_minus_1: f64,
    pub data_norm_ratio: f64,
}

/// Checks `sup_t ||u(t)||_{H^sigma}` and `sup_t ||d_t u(t)||_{H^{sigma-1}}`
/// against the data norm. The time derivative is reconstructed spectrally:
/// `d_t u = cos(t w) g - w sin(t w) f + Int_0^t cos((t-s) w) F_k(u) ds`.
pub fn persistence_check(
    result: &SolveResult,
    f: &RadialProfile,
    g: &RadialProfile,
    nonlinearity: &Nonlinearity,
) -> Result<PersistenceReport, NlwError> {
    let ctx = SpectralContext::from_profile(f)?;
    let sigma = result.sigma;
    let f_hat = ctx.analyze(f);
    let g_hat = ctx.analyze(g);
    let slices = result.solution.len();
    let dt = result.times[1] - result.times[0];

    let forcing: Vec<Vec<Complex64>> = result
        .solution
        .iter()
        .map(|slice| {
            let fk = RadialProfile::new(
                slice.radii.clone(),
                slice.values.iter().map(|&u| nonlinearity.apply(u)).collect(),
            )
            .expect("forcing grid is valid");
            ctx.analyze(&fk)
        })
        .collect();

    let modes = ctx.modes;
    let mut cum_c = vec![Complex64::new(0.0, 0.0); modes];
    let mut cum_s = vec![Complex64::new(0.0, 0.0); modes];
    let mut sup_hsigma = 0.0f64;
    let mut sup_hsigma_m1 = 0.0f64;

    for i in 0..slices {
        let t = result.times[i];
        if i > 0 {
            let a = result.times[i - 1];
            for m in 0..modes {
                let w = ctx.omega(m);
                let (i0c, i1c, i0s, i1s) = filon_increments(w, a, dt);
                let h0 = forcing[i - 1][m];
                let h1 = forcing[i][m];
                let slope = (h1 - h0) / dt;
                cum_c[m] += h0 * i0c + slope * i1c;
                cum_s[m] += h0 * i0s + slope * i1s;
            }
        }
        let n = ctx.modes as f64 + 1.0;
        let mut acc_s = 0.0;
        let mut acc_s1 = 0.0;
        for m in 0..modes {
            let w = ctx.omega(m);
            let (st, ct) = (t * w).sin_cos();
            let u_hat = f_hat[m] * ct + g_hat[m] * st / w + (cum_c[m] * st - cum_s[m] * ct) / w;
            // d_t of the same expression
            let ut_hat = -f_hat[m] * w * st + g_hat[m] * ct + cum_c[m] * ct + cum_s[m] * st;
            acc_s += w.powf(2.0 * sigma) * u_hat.norm_sqr();
            acc_s1 += w.powf(2.0 * (sigma - 1.0)) * ut_hat.norm_sqr();
        }
        let scale = 4.0 * std::f64::consts::PI * ctx.step * (2.0 / n);
        sup_hsigma = sup_hsigma.max((scale * acc_s).sqrt());
        sup_hsigma_m1 = sup_hsigma_m1.max((scale * acc_s1).sqrt());
    }

    let data_norm = sobolev_norm(f, sigma)? + sobolev_norm(g, sigma - 1.0)?;
    let ratio = if data_norm == 0.0 {
        0.0
    } else {
        sup_hsigma.max(sup_hsigma_m1) / data_norm
    };
    Ok(PersistenceReport {
        sup_hsigma,
        sup_hsigma_minus_1: sup_hsigma_m1,
        data_norm_ratio: ratio,
    })
}

/// Uniform spectral grid `r_j = j h` for `j = 1..modes`, `h = L/(modes+1)`.
pub fn spectral_radii(domain_radius: f64, modes: usize) -> Vec<f64> {
    let h = domain_radius / (modes as f64 + 1.0);
    (1..=modes).map(|j| j as f64 * h).collect()
}

/// Gaussian datum `amplitude * exp(-shape (lambda r)^2)` on the spectral grid.
pub fn gaussian_datum(
    domain_radius: f64,
    modes: usize,
    amplitude: f64,
    shape: f64,
    lambda: f64,
) -> RadialProfile {
    let radii = spectral_radii(domain_radius, modes);
    let values = radii
        .iter()
        .map(|&r| Complex64::new(amplitude * (-shape * (lambda * r) * (lambda * r)).exp(), 0.0))
        .collect();
    RadialProfile::new(radii, values).expect("gaussian grid is valid")
}
