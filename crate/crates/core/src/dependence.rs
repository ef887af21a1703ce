//! Exponential default-time marginals coupled by a Gumbel survival copula.
//!
//! With constant intensities `lambda_A`, `lambda_B` the joint survival of the
//! assignor and debtor default times is
//!
//! ```text
//! P(tau_A > t_A, tau_B > t_B) = exp(-[(lambda_A t_A)^theta + (lambda_B t_B)^theta]^(1/theta))
//! ```
//!
//! `theta = 1` is independence and `theta -> inf` the comonotonic limit. All
//! evaluation routines are pure; sampling goes through an explicit RNG handle.

use rand::distr::Open01;
use rand::Rng;
use std::f64::consts::PI;

use crate::error::{check, FactoringError, Result};

/// Largest accepted copula parameter. Beyond this the model cannot be told
/// apart from the comonotonic limit in double precision.
pub const THETA_MAX: f64 = 1e6;

/// Stand-in default time for an obligor with zero intensity. Larger than any
/// finite maturity or suspect period a scenario can hold.
pub const BEYOND_HORIZON: f64 = f64::MAX;

/// Debtor sentinel, kept distinct from the assignor one so that a pair of
/// riskless obligors still has a strict ordering.
const BEYOND_HORIZON_DEBTOR: f64 = f64::MAX / 2.0;

/// Constant default intensity (hazard rate) of one obligor, per year.
///
/// Zero is accepted as the riskless limit (survival identically one).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalIntensity(f64);

impl MarginalIntensity {
    pub fn new(lambda: f64) -> Result<Self> {
        check(
            lambda.is_finite() && lambda >= 0.0,
            "lambda",
            lambda,
            "must be finite and >= 0",
        )?;
        Ok(Self(lambda))
    }

    /// The riskless obligor, `lambda = 0`.
    pub fn riskless() -> Self {
        Self(0.0)
    }

    pub fn lambda(&self) -> f64 {
        self.0
    }

    pub fn is_riskless(&self) -> bool {
        self.0 == 0.0
    }

    /// `P(tau > t) = exp(-lambda t)`.
    pub fn survival(&self, t: f64) -> f64 {
        (-self.0 * t).exp()
    }

    /// `P(tau < t) = 1 - exp(-lambda t)`, evaluated without cancellation.
    pub fn default_probability(&self, t: f64) -> f64 {
        -(-self.0 * t).exp_m1()
    }
}

/// Gumbel copula parameter `theta >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GumbelDependence(f64);

impl GumbelDependence {
    pub fn new(theta: f64) -> Result<Self> {
        validate_theta(theta)?;
        Ok(Self(theta))
    }

    pub fn independent() -> Self {
        Self(1.0)
    }

    pub fn from_kendall_tau(tau: f64) -> Result<Self> {
        Self::new(theta_from_kendall_tau(tau)?)
    }

    pub fn theta(&self) -> f64 {
        self.0
    }

    pub fn kendall_tau(&self) -> f64 {
        1.0 - 1.0 / self.0
    }

    pub fn is_independent(&self) -> bool {
        self.0 == 1.0
    }
}

/// One joint draw of (assignor, debtor) default times in years.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefaultTimePair {
    pub tau_a: f64,
    pub tau_b: f64,
}

fn validate_theta(theta: f64) -> Result<()> {
    check(theta >= 1.0, "theta", theta, "must be >= 1")?;
    check(theta <= THETA_MAX, "theta", theta, "must be <= 1e6")
}

fn validate_time(name: &'static str, t: f64) -> Result<()> {
    check(t.is_finite() && t >= 0.0, name, t, "must be finite and >= 0")
}

/// `(a^theta + b^theta)^(1/theta)` for `a, b >= 0`, `theta >= 1`.
///
/// Evaluated as `m * (1 + (min/m)^theta)^(1/theta)` with `m = max(a, b)`, so
/// nothing overflows and the result decreases to `m` as `theta` grows.
pub fn theta_power_mean(a: f64, b: f64, theta: f64) -> Result<f64> {
    check(a.is_finite() && a >= 0.0, "a", a, "must be finite and >= 0")?;
    check(b.is_finite() && b >= 0.0, "b", b, "must be finite and >= 0")?;
    validate_theta(theta)?;
    Ok(power_mean_unchecked(a, b, theta))
}

#[inline]
fn power_mean_unchecked(a: f64, b: f64, theta: f64) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if hi == 0.0 {
        return 0.0;
    }
    if theta == 1.0 {
        return a + b;
    }
    let ratio = (lo / hi).powf(theta);
    hi * (ratio.ln_1p() / theta).exp()
}

/// `P(tau_A > t_a, tau_B > t_b)`.
pub fn joint_survival(
    t_a: f64,
    t_b: f64,
    lam_a: &MarginalIntensity,
    lam_b: &MarginalIntensity,
    dep: &GumbelDependence,
) -> Result<f64> {
    validate_time("t_a", t_a)?;
    validate_time("t_b", t_b)?;
    let pm = theta_power_mean(lam_a.lambda() * t_a, lam_b.lambda() * t_b, dep.theta())?;
    Ok((-pm).exp())
}

/// `P(tau_A < t_a, tau_B < t_b)`, recovered from the joint survival by
/// inclusion-exclusion.
pub fn joint_cdf(
    t_a: f64,
    t_b: f64,
    lam_a: &MarginalIntensity,
    lam_b: &MarginalIntensity,
    dep: &GumbelDependence,
) -> Result<f64> {
    let s = joint_survival(t_a, t_b, lam_a, lam_b, dep)?;
    if t_a == 0.0 || t_b == 0.0 {
        return Ok(0.0);
    }
    let f = s - lam_a.survival(t_a) + lam_b.default_probability(t_b);
    Ok(f.clamp(0.0, 1.0))
}

/// Joint density of `(tau_A, tau_B)` in the open positive quadrant.
///
/// For `theta > 1` the density is singular on the axes and a
/// [`FactoringError::DensityBoundary`] is returned there.
pub fn joint_density(
    t_a: f64,
    t_b: f64,
    lam_a: &MarginalIntensity,
    lam_b: &MarginalIntensity,
    dep: &GumbelDependence,
) -> Result<f64> {
    validate_time("t_a", t_a)?;
    validate_time("t_b", t_b)?;
    let theta = dep.theta();
    let (la, lb) = (lam_a.lambda(), lam_b.lambda());
    if t_a == 0.0 || t_b == 0.0 {
        if theta == 1.0 {
            return Ok(la * lb * (-la * t_a - lb * t_b).exp());
        }
        return Err(FactoringError::DensityBoundary { t_a, t_b, theta });
    }
    if la == 0.0 || lb == 0.0 {
        return Ok(0.0);
    }
    let (u, v) = (la * t_a, lb * t_b);
    let pm = power_mean_unchecked(u, v, theta);
    // lambda_A lambda_B (u/P)^(theta-1) (v/P)^(theta-1) (P + theta - 1) / P * exp(-P)
    let shape = ((u / pm) * (v / pm)).powf(theta - 1.0);
    Ok(la * lb * shape * (pm + theta - 1.0) / pm * (-pm).exp())
}

/// Kendall's tau of the Gumbel copula, `1 - 1/theta`.
pub fn kendall_tau_from_theta(theta: f64) -> Result<f64> {
    validate_theta(theta)?;
    Ok(1.0 - 1.0 / theta)
}

/// Inverse of [`kendall_tau_from_theta`]. `tau = 1` (comonotonic) has no
/// finite parameter and is rejected.
pub fn theta_from_kendall_tau(tau: f64) -> Result<f64> {
    check((0.0..1.0).contains(&tau), "kendall_tau", tau, "must lie in [0, 1)")?;
    let theta = 1.0 / (1.0 - tau);
    validate_theta(theta)?;
    Ok(theta)
}

/// Exact sampler for the exponential/Gumbel model.
///
/// Uses the Marshall-Olkin frailty construction: a positive-stable variable
/// `S` with Laplace transform `exp(-s^(1/theta))` drawn by the
/// Chambers-Mallows-Stuck (Kanter) formula, then
/// `V_i = exp(-(E_i / S)^(1/theta))` with independent unit exponentials `E_i`,
/// and `tau_i = -ln(V_i) / lambda_i`.
#[derive(Debug, Clone, Copy)]
pub struct PairSampler {
    lam_a: f64,
    lam_b: f64,
    alpha: f64,
}

impl PairSampler {
    pub fn new(lam_a: &MarginalIntensity, lam_b: &MarginalIntensity, dep: &GumbelDependence) -> Self {
        Self {
            lam_a: lam_a.lambda(),
            lam_b: lam_b.lambda(),
            alpha: 1.0 / dep.theta(),
        }
    }

    /// Draws one pair. Exact ties `tau_a == tau_b` are re-drawn.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DefaultTimePair {
        loop {
            let pair = self.draw(rng);
            if pair.tau_a != pair.tau_b {
                return pair;
            }
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> DefaultTimePair {
        let e_a = unit_exponential(rng);
        let e_b = unit_exponential(rng);
        let (x_a, x_b) = if self.alpha == 1.0 {
            (e_a, e_b)
        } else {
            // (E_i / S)^alpha = exp(alpha ln E_i - alpha ln S)
            let alpha_log_s = alpha_log_positive_stable(self.alpha, rng);
            (
                (self.alpha * e_a.ln() - alpha_log_s).exp(),
                (self.alpha * e_b.ln() - alpha_log_s).exp(),
            )
        };
        DefaultTimePair {
            tau_a: scale_time(x_a, self.lam_a, BEYOND_HORIZON),
            tau_b: scale_time(x_b, self.lam_b, BEYOND_HORIZON_DEBTOR),
        }
    }
}

/// Draws one correlated pair of default times.
pub fn sample_pair<R: Rng + ?Sized>(
    lam_a: &MarginalIntensity,
    lam_b: &MarginalIntensity,
    dep: &GumbelDependence,
    rng: &mut R,
) -> DefaultTimePair {
    PairSampler::new(lam_a, lam_b, dep).sample(rng)
}

#[inline]
fn scale_time(x: f64, lambda: f64, sentinel: f64) -> f64 {
    if lambda == 0.0 {
        return sentinel;
    }
    (x / lambda).min(sentinel)
}

#[inline]
fn unit_exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    -u.ln()
}

/// `alpha * ln S` for `S` positive stable with `E[exp(-s S)] = exp(-s^alpha)`,
/// `0 < alpha < 1`:
///
/// ```text
/// S = sin(alpha U) / sin(U)^(1/alpha) * (sin((1 - alpha) U) / E)^((1 - alpha) / alpha)
/// ```
///
/// with `U ~ Uniform(0, pi)` and `E ~ Exp(1)`. Kept in log space, scaled by
/// `alpha`, so it stays finite for `alpha` down to `1 / THETA_MAX`.
fn alpha_log_positive_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let u = PI * rng.sample::<f64, _>(Open01);
    let e = unit_exponential(rng);
    alpha * (alpha * u).sin().ln() - u.sin().ln() + (1.0 - alpha) * (((1.0 - alpha) * u).sin().ln() - e.ln())
}
