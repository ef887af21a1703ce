//! Event taxonomy for the factor's payoff.
//!
//! Without revocatory the six orderings of `(tau_A, tau_B, T)` are the
//! events, and the payoff only depends on whether `tau_B < T`. With the
//! revocatory each ordering is further split by `tau_A < delta`, giving
//! twelve events. All eight `tau_A < delta` events pay the clawback amount
//! `(1 + r_A) price - C`, including those where the debtor already paid.

use std::collections::BTreeMap;

use crate::error::{FactoringError, Result};
use crate::pricing::{tolerance, DealTerms, ModelTag, PriceResult, ProbabilityTriple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    Plain,
    Revocatory,
}

/// Relative order of the assignor default, the debtor default and maturity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DefaultOrder {
    /// `tau_A < tau_B < T`
    AssignorDebtorMaturity,
    /// `tau_B < tau_A < T`
    DebtorAssignorMaturity,
    /// `tau_B < T < tau_A`
    DebtorMaturityAssignor,
    /// `tau_A < T < tau_B`
    AssignorMaturityDebtor,
    /// `T < tau_B < tau_A`
    MaturityDebtorAssignor,
    /// `T < tau_A < tau_B`
    MaturityAssignorDebtor,
}

impl DefaultOrder {
    pub const ALL: [DefaultOrder; 6] = [
        DefaultOrder::AssignorDebtorMaturity,
        DefaultOrder::DebtorAssignorMaturity,
        DefaultOrder::DebtorMaturityAssignor,
        DefaultOrder::AssignorMaturityDebtor,
        DefaultOrder::MaturityDebtorAssignor,
        DefaultOrder::MaturityAssignorDebtor,
    ];

    pub fn debtor_defaults_before_maturity(&self) -> bool {
        matches!(
            self,
            DefaultOrder::AssignorDebtorMaturity
                | DefaultOrder::DebtorAssignorMaturity
                | DefaultOrder::DebtorMaturityAssignor
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventLabel {
    pub regime: Regime,
    pub order: DefaultOrder,
    /// `tau_A < delta`; always `false` in the plain regime.
    pub clawback: bool,
}

impl EventLabel {
    /// All labels of a regime: 6 plain, 12 revocatory.
    pub fn all(regime: Regime) -> Vec<EventLabel> {
        let flags: &[bool] = match regime {
            Regime::Plain => &[false],
            Regime::Revocatory => &[false, true],
        };
        flags
            .iter()
            .flat_map(|&clawback| {
                DefaultOrder::ALL.iter().map(move |&order| EventLabel {
                    regime,
                    order,
                    clawback,
                })
            })
            .collect()
    }

    pub fn payoff_kind(&self) -> PayoffKind {
        if self.clawback {
            PayoffKind::Clawback
        } else if self.order.debtor_defaults_before_maturity() {
            PayoffKind::RecoveryB
        } else {
            PayoffKind::Full
        }
    }

    /// Conventional letter of the event in the event tables, `(a)` to `(n)`
    /// (the revocatory list skips `j` and `k`).
    pub fn letter(&self) -> char {
        use DefaultOrder::*;
        match (self.regime, self.order, self.clawback) {
            (Regime::Plain, AssignorDebtorMaturity, _) => 'a',
            (Regime::Plain, DebtorAssignorMaturity, _) => 'b',
            (Regime::Plain, DebtorMaturityAssignor, _) => 'c',
            (Regime::Plain, MaturityAssignorDebtor, _) => 'd',
            (Regime::Plain, MaturityDebtorAssignor, _) => 'e',
            (Regime::Plain, AssignorMaturityDebtor, _) => 'f',
            (Regime::Revocatory, order, clawback) => {
                let idx = match order {
                    DebtorAssignorMaturity => 0,
                    AssignorDebtorMaturity => 1,
                    DebtorMaturityAssignor => 2,
                    AssignorMaturityDebtor => 3,
                    MaturityDebtorAssignor => 4,
                    MaturityAssignorDebtor => 5,
                };
                let letters: [char; 6] = if clawback {
                    ['g', 'h', 'i', 'l', 'm', 'n']
                } else {
                    ['a', 'b', 'c', 'd', 'e', 'f']
                };
                letters[idx]
            }
        }
    }
}

/// Payoff classes. Within a class every event pays the same amount.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PayoffKind {
    /// `r_B C`
    RecoveryB,
    /// `C`
    Full,
    /// `-alpha C + r_A C (1 - alpha) = (1 + r_A) price - C`
    Clawback,
}

impl PayoffKind {
    pub fn amount(&self, price: f64, terms: &DealTerms) -> f64 {
        let c = terms.face_value_c;
        match self {
            PayoffKind::RecoveryB => terms.recovery_b * c,
            PayoffKind::Full => c,
            PayoffKind::Clawback => (1.0 + terms.recovery_a) * price - c,
        }
    }
}

/// Assigns a pair of default times to its event.
///
/// Exact equality of `tau_A` with `tau_B`, `T` or (revocatory only) `delta`,
/// or of `tau_B` with `T`, has probability zero and is reported as a
/// [`FactoringError::Tie`].
pub fn classify(tau_a: f64, tau_b: f64, terms: &DealTerms, regime: Regime) -> Result<EventLabel> {
    if !(tau_a >= 0.0 && tau_b >= 0.0) {
        return Err(FactoringError::Domain {
            name: "tau",
            value: if tau_a >= 0.0 { tau_b } else { tau_a },
            constraint: "default times must be >= 0",
        });
    }
    let t = terms.maturity_t;
    if tau_a == tau_b {
        return Err(FactoringError::Tie("tau_A == tau_B"));
    }
    if tau_a == t || tau_b == t {
        return Err(FactoringError::Tie("default time equals maturity"));
    }
    let clawback = match regime {
        Regime::Plain => false,
        Regime::Revocatory => {
            if tau_a == terms.suspect_period_delta {
                return Err(FactoringError::Tie("tau_A equals the suspect period"));
            }
            tau_a < terms.suspect_period_delta
        }
    };
    let order = match (tau_a < tau_b, tau_a < t, tau_b < t) {
        (true, true, true) => DefaultOrder::AssignorDebtorMaturity,
        (false, true, true) => DefaultOrder::DebtorAssignorMaturity,
        (_, false, true) => DefaultOrder::DebtorMaturityAssignor,
        (_, true, false) => DefaultOrder::AssignorMaturityDebtor,
        (false, false, false) => DefaultOrder::MaturityDebtorAssignor,
        (true, false, false) => DefaultOrder::MaturityAssignorDebtor,
    };
    Ok(EventLabel {
        regime,
        order,
        clawback,
    })
}

pub type EventProbabilities = BTreeMap<EventLabel, f64>;

fn validate_event_probs(event_probs: &EventProbabilities) -> Result<Regime> {
    let mut regime = None;
    let mut sum = 0.0;
    for (label, &p) in event_probs {
        if !(0.0..=1.0).contains(&p) {
            return Err(FactoringError::EventProbabilities(format!(
                "event ({}) has probability {p}",
                label.letter()
            )));
        }
        if label.regime == Regime::Plain && label.clawback {
            return Err(FactoringError::EventProbabilities(
                "plain-regime label carries a clawback flag".into(),
            ));
        }
        match regime {
            None => regime = Some(label.regime),
            Some(r) if r != label.regime => {
                return Err(FactoringError::EventProbabilities("labels mix regimes".into()))
            }
            _ => {}
        }
        sum += p;
    }
    if (sum - 1.0).abs() > tolerance::EVENT_SUM_ABS {
        return Err(FactoringError::EventProbabilities(format!(
            "probabilities sum to {sum}, expected 1"
        )));
    }
    regime.ok_or_else(|| FactoringError::EventProbabilities("no events".into()))
}

/// Sums event probabilities per payoff class.
pub fn aggregate_to_triple(event_probs: &EventProbabilities) -> Result<ProbabilityTriple> {
    validate_event_probs(event_probs)?;
    let mut triple = ProbabilityTriple {
        p_debtor_default_no_clawback: 0.0,
        p_joint_survival: 0.0,
        p_clawback: 0.0,
    };
    for (label, &p) in event_probs {
        match label.payoff_kind() {
            PayoffKind::RecoveryB => triple.p_debtor_default_no_clawback += p,
            PayoffKind::Full => triple.p_joint_survival += p,
            PayoffKind::Clawback => triple.p_clawback += p,
        }
    }
    Ok(triple)
}

/// Solves `price = sum_e P(e) payoff_e(price)`.
///
/// Every payoff is affine in the price, so the fixed point is
/// `price = intercept / (1 - slope)` with `slope = (1 + r_A) P(clawback)`.
pub fn solve_expected_payoff_fixed_point(event_probs: &EventProbabilities, terms: &DealTerms) -> Result<PriceResult> {
    terms.validate()?;
    let regime = validate_event_probs(event_probs)?;
    let (mut slope, mut intercept) = (0.0, 0.0);
    for (label, &p) in event_probs {
        let kind = label.payoff_kind();
        let at_zero = kind.amount(0.0, terms);
        slope += p * (kind.amount(1.0, terms) - at_zero);
        intercept += p * at_zero;
    }
    let denominator = 1.0 - slope;
    if denominator <= 0.0 {
        return Err(FactoringError::DegenerateDeal { denominator });
    }
    let triple = aggregate_to_triple(event_probs)?;
    let tag = match regime {
        Regime::Plain => ModelTag::Standard,
        Regime::Revocatory => ModelTag::RevocatoryFromProbs,
    };
    Ok(PriceResult::new(
        intercept / denominator,
        terms.face_value_c,
        triple,
        tag,
    ))
}
