//! Exact admissibility predicates and exponent bookkeeping.
//!
//! Everything here runs on [`ExtendedRational`]: no floating point enters any
//! predicate, so boundary cases (`r_tilde < 5` versus `r_tilde = 5`) are
//! decided exactly. Upper bounds of the form `x < a/b` are checked in the
//! cross-multiplied form `x * b < a` (for positive `x`), which also gives the
//! correct reading when the denominator is zero or negative: the constraint
//! then holds for every positive `x`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{rat, ExtendedRational};

#[derive(Debug, Error)]
pub enum RegionsError {
    #[error("invalid exponent tuple: {0}")]
    InvalidExponent(String),
    #[error("inadmissible input: {0}")]
    Inadmissible(String),
    #[error("domain error: {0}")]
    Domain(String),
}

/// Dual Lebesgue indices `(q1~, q1, r1~, r1)` for retarded estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualIndices {
    pub q1_tilde: ExtendedRational,
    pub q1: ExtendedRational,
    pub r1_tilde: ExtendedRational,
    pub r1: ExtendedRational,
}

/// The full set of indices appearing in the mixed-norm estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentTuple {
    pub n: u32,
    pub sigma: ExtendedRational,
    pub gamma: Option<ExtendedRational>,
    pub q_tilde: ExtendedRational,
    pub q: ExtendedRational,
    pub r_tilde: ExtendedRational,
    pub r: ExtendedRational,
    pub dual: Option<DualIndices>,
}

fn check_lebesgue(name: &str, e: ExtendedRational) -> Result<(), RegionsError> {
    if e < ExtendedRational::one() {
        return Err(RegionsError::InvalidExponent(format!(
            "{name} must lie in [1, inf], got {e}"
        )));
    }
    Ok(())
}

impl ExponentTuple {
    pub fn new(
        n: u32,
        sigma: ExtendedRational,
        q_tilde: ExtendedRational,
        q: ExtendedRational,
        r_tilde: ExtendedRational,
        r: ExtendedRational,
    ) -> Result<Self, RegionsError> {
        if n < 2 {
            return Err(RegionsError::InvalidExponent(format!("n must be >= 2, got {n}")));
        }
        if sigma.is_infinite() {
            return Err(RegionsError::InvalidExponent("sigma must be finite".into()));
        }
        for (name, e) in [("q~", q_tilde), ("q", q), ("r~", r_tilde), ("r", r)] {
            check_lebesgue(name, e)?;
        }
        Ok(Self { n, sigma, gamma: None, q_tilde, q, r_tilde, r, dual: None })
    }

    pub fn with_gamma(mut self, gamma: ExtendedRational) -> Result<Self, RegionsError> {
        if gamma.is_infinite() {
            return Err(RegionsError::InvalidExponent("gamma must be finite".into()));
        }
        self.gamma = Some(gamma);
        Ok(self)
    }

    pub fn with_dual(mut self, dual: DualIndices) -> Result<Self, RegionsError> {
        for (name, e) in [
            ("q1~", dual.q1_tilde),
            ("q1", dual.q1),
            ("r1~", dual.r1_tilde),
            ("r1", dual.r1),
        ] {
            check_lebesgue(name, e)?;
        }
        self.dual = Some(dual);
        Ok(self)
    }

    /// Conjugates `(q~', q', r~', r')` of the primal indices.
    pub fn conjugate_indices(
        &self,
    ) -> (ExtendedRational, ExtendedRational, ExtendedRational, ExtendedRational) {
        (
            self.q_tilde.conjugate(),
            self.q.conjugate(),
            self.r_tilde.conjugate(),
            self.r.conjugate(),
        )
    }
}

/// Case exponents of the annulus bookkeeping:
/// `alpha = (r~/2)(-n+gamma+1) + n`, `lambda = -(r~/2)(n-1)/2 + n-1`,
/// `beta = (r~/2)(-n/2-1/2+gamma)`, `kappa = -(r/r~)(n-1) + n-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseExponents {
    pub alpha: ExtendedRational,
    pub lambda: ExtendedRational,
    pub beta: ExtendedRational,
    pub kappa: ExtendedRational,
}

/// Fixed-point ball radius and guaranteed existence time.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ContractionPlan {
    pub k: ExtendedRational,
    pub q0_tilde: ExtendedRational,
    pub ball_radius: f64,
    pub life_span: f64,
    pub constant: f64,
}

/// Classical wave admissibility:
/// `2 <= q <= inf`, `2 <= r < inf`, `2/q + (n-1)/r <= (n-1)/2`,
/// `1/q + n/r = n/2 - sigma`.
pub fn is_wave_admissible(
    n: u32,
    q: ExtendedRational,
    r: ExtendedRational,
    sigma: ExtendedRational,
) -> bool {
    let two = ExtendedRational::int(2);
    let nn = ExtendedRational::int(n as i64);
    let n1 = ExtendedRational::int(n as i64 - 1);
    if q < two || r < two || r.is_infinite() {
        return false;
    }
    let gap = two * q.recip() + n1 * r.recip();
    let scaling = q.recip() + nn * r.recip();
    gap <= n1 / two && scaling == nn / two - sigma
}

/// Homogeneous mixed-norm admissibility for `n >= 3`:
/// `n/4 < sigma < (n-1)/2`, `2 <= q~ < q < inf`,
/// `2n/(n-2 sigma) < r <= r~` with the branch upper bound on `r~`, and the
/// two conditions `1/q~ + (n-1)/r~ > n/2 - sigma`, `1/q + n/r = n/2 - sigma`.
pub fn thm1_admissible(t: &ExponentTuple) -> bool {
    let n = t.n as i64;
    if n < 3 {
        return false;
    }
    let nn = ExtendedRational::int(n);
    let two = ExtendedRational::int(2);
    let four = ExtendedRational::int(4);
    let s = t.sigma;

    if !(s > nn / four && s < rat(n - 1, 2)) {
        return false;
    }
    if !(t.q_tilde >= two && t.q_tilde < t.q && !t.q.is_infinite()) {
        return false;
    }
    // 2n/(n - 2 sigma) < r <= r~  (n - 2 sigma > 0 because sigma < (n-1)/2)
    if !(t.r * (nn - two * s) > two * nn && t.r <= t.r_tilde) {
        return false;
    }
    // branch bound on r~, cross-multiplied
    let branch_point = nn / four + rat(1, 2 * (n - 1));
    let in_upper = if s < branch_point {
        t.r_tilde * (nn - four * s + ExtendedRational::one()) < four
    } else {
        t.r_tilde * (nn - two * s - ExtendedRational::one()) < two * nn
    };
    if !in_upper {
        return false;
    }
    let n1 = nn - ExtendedRational::one();
    let target = nn / two - s;
    t.q_tilde.recip() + n1 * t.r_tilde.recip() > target
        && t.q.recip() + nn * t.r.recip() == target
}

/// Retarded mixed-norm admissibility (needs `gamma` and the dual indices).
pub fn thm2_admissible(t: &ExponentTuple) -> bool {
    let (gamma, dual) = match (t.gamma, t.dual) {
        (Some(g), Some(d)) => (g, d),
        _ => return false,
    };
    let n = t.n as i64;
    if n < 3 {
        return false;
    }
    let nn = ExtendedRational::int(n);
    let two = ExtendedRational::int(2);
    let one = ExtendedRational::one();
    let half_up = (nn + one) / two;

    if !((gamma > nn / two && gamma < half_up) || (gamma > half_up && gamma < nn - one)) {
        return false;
    }
    let inv_q = t.q.recip() + dual.q1.recip();
    let inv_qt = t.q_tilde.recip() + dual.q1_tilde.recip();
    if !(inv_q > ExtendedRational::zero() && inv_q < inv_qt && inv_qt <= one && !t.q.is_infinite())
    {
        return false;
    }
    let inv_rt = t.r_tilde.recip() + dual.r1_tilde.recip();
    let inv_r = t.r.recip() + dual.r1.recip();
    let lower = ((nn - two * gamma + one) / two).max((nn - gamma - one) / nn);
    if !(lower < inv_rt && inv_rt <= inv_r && inv_r < (nn - gamma) / nn) {
        return false;
    }
    let n1 = nn - one;
    inv_qt + n1 * inv_rt > nn - gamma && inv_q + nn * inv_r == nn - gamma
}

/// Kernel-decay admissibility:
/// `2n/(n-gamma) < r <= r~` together with the branch upper bound on `r~`
/// (`r~ (n-2 gamma+1) < 4` below the branch point `gamma = n/2 + 1/(n-1)`,
/// `r~ (n-gamma-1) < 2n` above; a nonpositive left factor makes the bound
/// vacuous, which is exactly the regime `gamma >= n-1` where the underlying
/// integrability condition holds for every `r~`).
pub fn propfix_admissible(
    n: u32,
    gamma: ExtendedRational,
    r: ExtendedRational,
    r_tilde: ExtendedRational,
) -> bool {
    let ni = n as i64;
    if ni < 3 || gamma.is_infinite() {
        return false;
    }
    let nn = ExtendedRational::int(ni);
    let one = ExtendedRational::one();
    let two = ExtendedRational::int(2);
    let four = ExtendedRational::int(4);
    if !(gamma > ExtendedRational::zero() && gamma < nn) {
        return false;
    }
    if !(r * (nn - gamma) > two * nn && r <= r_tilde) {
        return false;
    }
    let branch_point = nn / two + rat(1, ni - 1);
    if gamma < branch_point {
        r_tilde * (nn - two * gamma + one) < four
    } else {
        r_tilde * (nn - gamma - one) < two * nn
    }
}

/// Decay exponents of the windowed kernel norm:
/// `omega_small = -n + gamma + 2(n-1)/r~` for `|t| <= 1` and
/// `omega_large = -n + gamma + 2n/r` for `|t| >= 1`.
pub fn decay_exponents(
    n: u32,
    gamma: ExtendedRational,
    r: ExtendedRational,
    r_tilde: ExtendedRational,
) -> Result<(ExtendedRational, ExtendedRational), RegionsError> {
    if !propfix_admissible(n, gamma, r, r_tilde) {
        return Err(RegionsError::Inadmissible(format!(
            "(n={n}, gamma={gamma}, r={r}, r~={r_tilde}) fails the decay conditions"
        )));
    }
    let nn = ExtendedRational::int(n as i64);
    let two = ExtendedRational::int(2);
    let n1 = nn - ExtendedRational::one();
    let small = gamma - nn + two * n1 * r_tilde.recip();
    let large = gamma - nn + two * nn * r.recip();
    Ok((small, large))
}

pub fn case_exponents(
    n: u32,
    gamma: ExtendedRational,
    r: ExtendedRational,
    r_tilde: ExtendedRational,
) -> CaseExponents {
    let nn = ExtendedRational::int(n as i64);
    let one = ExtendedRational::one();
    let two = ExtendedRational::int(2);
    let half_rt = r_tilde / two;
    let n1 = nn - one;
    CaseExponents {
        alpha: half_rt * (gamma + one - nn) + nn,
        lambda: n1 - half_rt * n1 / two,
        beta: half_rt * (gamma - nn / two - one / two),
        kappa: n1 - (r / r_tilde) * n1,
    }
}

/// Largest nonlinearity power below the ill-posedness threshold:
/// `1 + 4/(n+1-4 sigma)` for `sigma <= 1/2`, `1 + 4/(n-2 sigma)` for
/// `sigma >= 1/2` (both branches agree at `sigma = 1/2`).
pub fn k_max(n: u32, sigma: ExtendedRational) -> Result<ExtendedRational, RegionsError> {
    let nn = ExtendedRational::int(n as i64);
    let one = ExtendedRational::one();
    let two = ExtendedRational::int(2);
    let four = ExtendedRational::int(4);
    if sigma.is_negative() || sigma.is_infinite() {
        return Err(RegionsError::Domain(format!("sigma must satisfy 0 <= sigma, got {sigma}")));
    }
    if sigma >= nn / two {
        return Err(RegionsError::Domain(format!(
            "sigma must be below n/2 = {}, got {sigma}",
            nn / two
        )));
    }
    if sigma <= rat(1, 2) {
        Ok(one + four / (nn + one - four * sigma))
    } else {
        Ok(one + four / (nn - two * sigma))
    }
}

/// Low-regularity corollary conditions at `n = 3`. Without dual indices this
/// checks the homogeneous system
/// `0 < 1/q < 1/q~ <= sigma/2`, `(1-sigma)/2 < 1/r~ <= 1/r < (3-2 sigma)/6`,
/// `1/q~ + 2/r~ > 1 - sigma/2`, `1/q + 3/r = 3/2 - sigma`;
/// with dual indices, the inhomogeneous variant on the index sums.
pub fn corollary_admissible(sigma: ExtendedRational, t: &ExponentTuple) -> bool {
    if t.n != 3 {
        return false;
    }
    let one = ExtendedRational::one();
    let two = ExtendedRational::int(2);
    let three = ExtendedRational::int(3);
    let half = rat(1, 2);
    match t.dual {
        None => {
            if !(sigma > ExtendedRational::zero() && sigma < one) {
                return false;
            }
            let iq = t.q.recip();
            let iqt = t.q_tilde.recip();
            let irt = t.r_tilde.recip();
            let ir = t.r.recip();
            iq > ExtendedRational::zero()
                && iq < iqt
                && iqt <= sigma / two
                && (one - sigma) / two < irt
                && irt <= ir
                && ir < (three - two * sigma) / ExtendedRational::int(6)
                && iqt + two * irt > one - sigma / two
                && iq + three * ir == three / two - sigma
        }
        Some(d) => {
            let iq = t.q.recip() + d.q1.recip();
            let iqt = t.q_tilde.recip() + d.q1_tilde.recip();
            let irt = t.r_tilde.recip() + d.r1_tilde.recip();
            let ir = t.r.recip() + d.r1.recip();
            iq > ExtendedRational::zero()
                && iq < iqt
                && iqt <= half
                && !t.q.is_infinite()
                && half < irt
                && irt <= ir
                && ir < rat(2, 3)
                && iqt + two * irt > three / two
                && iq + three * ir == two
        }
    }
}

/// Admissibility of a solution-space tuple for the power nonlinearity `u^k`
/// at `n = 3`: the closed conditions on `(q~, q, r~, r)` plus the eliminated
/// compatibility system in `k`.
pub fn nlw_admissible(t: &ExponentTuple, k: ExtendedRational) -> bool {
    if t.n != 3 || k <= ExtendedRational::one() || k.is_infinite() {
        return false;
    }
    let one = ExtendedRational::one();
    let two = ExtendedRational::int(2);
    let three = ExtendedRational::int(3);
    let four = ExtendedRational::int(4);
    let half = rat(1, 2);
    let quarter = rat(1, 4);

    let iq = t.q.recip();
    let iqt = t.q_tilde.recip();
    let irt = t.r_tilde.recip();
    let ir = t.r.recip();

    // closed conditions on the tuple
    if !(iq > ExtendedRational::zero() && iq < iqt && iqt <= quarter) {
        return false;
    }
    if !(quarter < irt && irt <= ir && ir < half) {
        return false;
    }
    let scale = iq + three * ir;
    let cap = (three / two - two * iqt).min(two * iqt + four * irt - half);
    if !(scale >= one && scale < cap) {
        return false;
    }

    // eliminated compatibility system for the given k
    let km1 = (k - one).recip(); // 1/(k-1)
    iqt < km1
        && iq < km1
        && km1 / three < irt
        && irt < km1 / two
        && km1 / three < ir
        && iqt + two * irt < three * km1 / two
}

/// Ball radius and life span for the contraction argument:
/// `M = 2 C (||f|| + ||g||)` and the largest `T < 1` with
/// `C T^{1/q0~} M^{k-1} <= 1/2` (capped at 0.99).
pub fn life_span(
    constant: f64,
    data_norm: f64,
    k: ExtendedRational,
    q0_tilde: ExtendedRational,
) -> Result<ContractionPlan, RegionsError> {
    if !(constant > 0.0) || !(data_norm >= 0.0) {
        return Err(RegionsError::Domain(
            "life span needs C > 0 and a nonnegative data norm".into(),
        ));
    }
    if k <= ExtendedRational::one() || k.is_infinite() {
        return Err(RegionsError::Domain(format!("nonlinearity power must exceed 1, got {k}")));
    }
    if !q0_tilde.is_positive() || q0_tilde.is_infinite() {
        return Err(RegionsError::Domain(format!(
            "q0~ must be finite positive, got {q0_tilde}"
        )));
    }
    let ball_radius = 2.0 * constant * data_norm;
    let kf = k.to_f64();
    let exponent = q0_tilde.to_f64();
    let life_span = if ball_radius == 0.0 {
        0.99
    } else {
        (1.0 / (2.0 * constant * ball_radius.powf(kf - 1.0)))
            .powf(exponent)
            .min(0.99)
    };
    let plan = ContractionPlan { k, q0_tilde, ball_radius, life_span, constant };
    debug_assert!(
        plan.constant * plan.life_span.powf(1.0 / exponent) * plan.ball_radius.powf(kf - 1.0)
            <= 0.5 + 1e-12,
        "contraction budget violated"
    );
    Ok(plan)
}

/// One sampled point of the homogeneous-estimate region in the
/// `(1/r, 1/r~)` plane.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegionSample {
    pub inv_r: ExtendedRational,
    pub inv_r_tilde: ExtendedRational,
    pub admissible: bool,
}

/// Samples the `(1/r, 1/r~)` region for fixed `sigma`: a point is flagged
/// when the scaling condition fixes a valid `q` and some `q~ in [2, q)`
/// satisfies the remaining strict inequality (the supremum sits at `q~ = 2`).
pub fn sample_thm1_region(n: u32, sigma: ExtendedRational, denom: i64) -> Vec<RegionSample> {
    let mut out = Vec::new();
    let nn = ExtendedRational::int(n as i64);
    let two = ExtendedRational::int(2);
    let half = rat(1, 2);
    for i in 1..denom {
        let inv_r = rat(i, 2 * denom); // 1/r in (0, 1/2)
        for j in 1..denom {
            let inv_rt = rat(j, 2 * denom);
            let inv_q = nn / two - sigma - nn * inv_r;
            let feasible = inv_q > ExtendedRational::zero() && inv_q < half && {
                let q = inv_q.recip();
                let r = inv_r.recip();
                let rt = inv_rt.recip();
                match ExponentTuple::new(n, sigma, two, q, rt, r) {
                    Ok(t) => thm1_admissible(&t),
                    Err(_) => false,
                }
            };
            out.push(RegionSample { inv_r, inv_r_tilde: inv_rt, admissible: feasible });
        }
    }
    out
}

/// CSV rendering of a region sample: `inv_r,inv_r_tilde,admissible`.
pub fn region_csv(samples: &[RegionSample]) -> String {
    let mut s = String::from("inv_r,inv_r_tilde,admissible\n");
    for row in samples {
        s.push_str(&format!("{},{},{}\n", row.inv_r, row.inv_r_tilde, row.admissible));
    }
    s
}

/// The maximal power curve `sigma -> k(sigma)` sampled on `sigma = i/denom`.
pub fn k_max_curve(n: u32, denom: i64) -> Vec<(ExtendedRational, ExtendedRational)> {
    let mut out = Vec::new();
    let top = ExtendedRational::int(n as i64) / ExtendedRational::int(2);
    for i in 0..(2 * denom) {
        let sigma = rat(i, denom);
        if sigma >= top {
            break;
        }
        if let Ok(k) = k_max(n, sigma) {
            out.push((sigma, k));
        }
    }
    out
}

/// CSV rendering of the `k(sigma)` curve: `sigma,k_max`.
pub fn k_max_csv(curve: &[(ExtendedRational, ExtendedRational)]) -> String {
    let mut s = String::from("sigma,k_max\n");
    for (sigma, k) in curve {
        s.push_str(&format!("{sigma},{k}\n"));
    }
    s
}
