//! Closed-form prices for a non-recourse invoice purchase.
//!
//! Prices are undiscounted expected payoffs to the factor. Two models:
//!
//! * **standard**: only the debtor's default before maturity matters,
//!   `price = C (1 - (1 - r) PD_T)`.
//! * **revocatory**: if the assignor defaults within the suspect period
//!   `delta` after the sale, the sale is unwound and the factor receives
//!   `(1 + r_A) price - C`. Since that payoff depends on the price itself the
//!   price solves an affine fixed point; see [`revocatory_price_from_probs`].

use serde::{Deserialize, Serialize};

use crate::dependence::{joint_survival, GumbelDependence, MarginalIntensity};
use crate::error::{check, FactoringError, Result};

/// Shared tolerances for identities and Monte Carlo agreement checks.
pub mod tolerance {
    /// Relative tolerance for algebraically identical price routes.
    pub const ALGEBRAIC_REL: f64 = 1e-12;
    /// Absolute slack on the probability triple summing to one.
    pub const PARTITION_ABS: f64 = 1e-15;
    /// Standard errors allowed between a Monte Carlo estimate and a closed form.
    pub const MC_SIGMAS: f64 = 4.0;
    /// Slack on externally supplied event probabilities summing to one.
    pub const EVENT_SUM_ABS: f64 = 1e-9;
}

/// Contract terms of one invoice purchase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DealTerms {
    /// Face value `C`.
    pub face_value_c: f64,
    /// Maturity `T` in years.
    pub maturity_t: f64,
    /// Suspect period `delta` in years for the bankruptcy revocatory.
    pub suspect_period_delta: f64,
    /// Recovery on the factor's claim against a bankrupt assignor.
    pub recovery_a: f64,
    /// Recovery on the invoice if the debtor defaults.
    pub recovery_b: f64,
}

impl DealTerms {
    pub fn new(c: f64, t: f64, delta: f64, recovery_a: f64, recovery_b: f64) -> Result<Self> {
        let terms = Self {
            face_value_c: c,
            maturity_t: t,
            suspect_period_delta: delta,
            recovery_a,
            recovery_b,
        };
        terms.validate()?;
        Ok(terms)
    }

    pub fn validate(&self) -> Result<()> {
        check(
            self.face_value_c.is_finite() && self.face_value_c > 0.0,
            "c",
            self.face_value_c,
            "must be finite and > 0",
        )?;
        check(
            self.maturity_t.is_finite() && self.maturity_t > 0.0,
            "t",
            self.maturity_t,
            "must be finite and > 0",
        )?;
        check(
            self.suspect_period_delta.is_finite() && self.suspect_period_delta >= 0.0,
            "delta",
            self.suspect_period_delta,
            "must be finite and >= 0",
        )?;
        check(
            (0.0..1.0).contains(&self.recovery_a),
            "r_a",
            self.recovery_a,
            "must lie in [0, 1)",
        )?;
        check(
            (0.0..=1.0).contains(&self.recovery_b),
            "r_b",
            self.recovery_b,
            "must lie in [0, 1]",
        )
    }
}

/// The three event-class probabilities that determine the revocatory price.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityTriple {
    /// `P(tau_B < T, tau_A > delta)`: debtor defaults, no clawback.
    pub p_debtor_default_no_clawback: f64,
    /// `P(tau_B > T, tau_A > delta)`: debtor pays, no clawback.
    pub p_joint_survival: f64,
    /// `P(tau_A < delta)`: the sale is unwound.
    pub p_clawback: f64,
}

impl ProbabilityTriple {
    pub fn new(p_debtor_default_no_clawback: f64, p_joint_survival: f64, p_clawback: f64) -> Result<Self> {
        let triple = Self {
            p_debtor_default_no_clawback,
            p_joint_survival,
            p_clawback,
        };
        triple.validate(tolerance::EVENT_SUM_ABS)?;
        Ok(triple)
    }

    /// Debtor-only split, no clawback.
    pub fn without_clawback(pd_t: f64) -> Self {
        Self {
            p_debtor_default_no_clawback: pd_t,
            p_joint_survival: 1.0 - pd_t,
            p_clawback: 0.0,
        }
    }

    pub fn sum(&self) -> f64 {
        self.p_debtor_default_no_clawback + self.p_joint_survival + self.p_clawback
    }

    fn validate(&self, slack: f64) -> Result<()> {
        for (name, p) in [
            ("p_debtor_default_no_clawback", self.p_debtor_default_no_clawback),
            ("p_joint_survival", self.p_joint_survival),
            ("p_clawback", self.p_clawback),
        ] {
            check((0.0..=1.0).contains(&p), name, p, "must lie in [0, 1]")?;
        }
        let sum = self.sum();
        check((sum - 1.0).abs() <= slack, "probability sum", sum, "must equal 1")
    }
}

/// Which route produced a price.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelTag {
    Standard,
    RevocatoryClosed,
    RevocatoryFromProbs,
    RevocatoryMc,
    StandardMc,
}

impl ModelTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelTag::Standard => "standard",
            ModelTag::RevocatoryClosed => "revocatory_closed",
            ModelTag::RevocatoryFromProbs => "revocatory_from_probs",
            ModelTag::RevocatoryMc => "revocatory_mc",
            ModelTag::StandardMc => "standard_mc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriceResult {
    pub price: f64,
    /// `alpha = 1 - price / C`, the discount consistent with the price.
    pub implied_discount_alpha: f64,
    pub triple: ProbabilityTriple,
    pub model_tag: ModelTag,
}

impl PriceResult {
    pub(crate) fn new(price: f64, c: f64, triple: ProbabilityTriple, model_tag: ModelTag) -> Self {
        Self {
            price,
            implied_discount_alpha: 1.0 - price / c,
            triple,
            model_tag,
        }
    }
}

/// Debtor-only price `C (1 - (1 - r) pd_t)`.
pub fn standard_price(c: f64, recovery: f64, pd_t: f64) -> Result<PriceResult> {
    check(c.is_finite() && c > 0.0, "c", c, "must be finite and > 0")?;
    check(
        (0.0..=1.0).contains(&recovery),
        "recovery",
        recovery,
        "must lie in [0, 1]",
    )?;
    check((0.0..=1.0).contains(&pd_t), "pd_t", pd_t, "must lie in [0, 1]")?;
    let price = c * (1.0 - (1.0 - recovery) * pd_t);
    Ok(PriceResult::new(
        price,
        c,
        ProbabilityTriple::without_clawback(pd_t),
        ModelTag::Standard,
    ))
}

/// Standard price with an exponential debtor marginal, `pd_t = 1 - exp(-lambda_B T)`.
pub fn standard_price_exponential(lam_b: &MarginalIntensity, terms: &DealTerms) -> Result<PriceResult> {
    terms.validate()?;
    standard_price(
        terms.face_value_c,
        terms.recovery_b,
        lam_b.default_probability(terms.maturity_t),
    )
}

/// Smallest discount `alpha` at which the factor breaks even: `(1 - r) pd_t`.
pub fn profitability_bound(recovery: f64, pd_t: f64) -> Result<f64> {
    check(
        (0.0..=1.0).contains(&recovery),
        "recovery",
        recovery,
        "must lie in [0, 1]",
    )?;
    check((0.0..=1.0).contains(&pd_t), "pd_t", pd_t, "must lie in [0, 1]")?;
    Ok((1.0 - recovery) * pd_t)
}

/// Closed-form event-class probabilities under the exponential/Gumbel model.
///
/// With `PM = [(lambda_A delta)^theta + (lambda_B T)^theta]^(1/theta)`:
/// `P(tau_B < T, tau_A > delta) = exp(-lambda_A delta) - exp(-PM)`,
/// `P(tau_B > T, tau_A > delta) = exp(-PM)` and
/// `P(tau_A < delta) = 1 - exp(-lambda_A delta)`.
pub fn probability_triple_closed(
    lam_a: &MarginalIntensity,
    lam_b: &MarginalIntensity,
    dep: &GumbelDependence,
    terms: &DealTerms,
) -> Result<ProbabilityTriple> {
    terms.validate()?;
    let delta = terms.suspect_period_delta;
    let survive_both = joint_survival(delta, terms.maturity_t, lam_a, lam_b, dep)?;
    let assignor_survives = lam_a.survival(delta);
    Ok(ProbabilityTriple {
        p_debtor_default_no_clawback: (assignor_survives - survive_both).max(0.0),
        p_joint_survival: survive_both,
        p_clawback: lam_a.default_probability(delta),
    })
}

/// Solves `price = r_B C p_a + C p_b + ((1 + r_A) price - C) p_c`:
///
/// ```text
/// price = C (r_B p_a + p_b - p_c) / (1 - (1 + r_A) p_c)
/// ```
pub fn revocatory_price_from_probs(triple: &ProbabilityTriple, terms: &DealTerms) -> Result<PriceResult> {
    terms.validate()?;
    triple.validate(tolerance::EVENT_SUM_ABS)?;
    let c = terms.face_value_c;
    let denominator = 1.0 - (1.0 + terms.recovery_a) * triple.p_clawback;
    if denominator <= 0.0 {
        return Err(FactoringError::DegenerateDeal { denominator });
    }
    let numerator =
        c * (terms.recovery_b * triple.p_debtor_default_no_clawback + triple.p_joint_survival - triple.p_clawback);
    Ok(PriceResult::new(
        numerator / denominator,
        c,
        *triple,
        ModelTag::RevocatoryFromProbs,
    ))
}

/// Fully closed revocatory price:
///
/// ```text
/// price = C ((1 - r_B) exp(-PM) - 1 + exp(-lambda_A delta)(1 + r_B))
///           / (exp(-lambda_A delta)(1 + r_A) - r_A)
/// ```
pub fn revocatory_price_closed(
    lam_a: &MarginalIntensity,
    lam_b: &MarginalIntensity,
    dep: &GumbelDependence,
    terms: &DealTerms,
) -> Result<PriceResult> {
    let triple = probability_triple_closed(lam_a, lam_b, dep, terms)?;
    let (c, r_a, r_b) = (terms.face_value_c, terms.recovery_a, terms.recovery_b);
    let assignor_survives = lam_a.survival(terms.suspect_period_delta);
    let denominator = assignor_survives * (1.0 + r_a) - r_a;
    if denominator <= 0.0 {
        return Err(FactoringError::DegenerateDeal { denominator });
    }
    let numerator = (1.0 - r_b) * triple.p_joint_survival - 1.0 + assignor_survives * (1.0 + r_b);
    Ok(PriceResult::new(
        c * numerator / denominator,
        c,
        triple,
        ModelTag::RevocatoryClosed,
    ))
}
