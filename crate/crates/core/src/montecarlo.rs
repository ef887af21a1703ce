//! Simulation oracle for the closed-form prices.
//!
//! Paths are split into `worker_count` contiguous blocks. Block `i` draws from
//! ChaCha8 seeded with `seed_from_u64(seed)` on stream `i`, so every estimate
//! is a pure function of `(n_paths, seed, worker_count)` regardless of how
//! rayon schedules the blocks.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dependence::{GumbelDependence, MarginalIntensity, PairSampler, BEYOND_HORIZON};
use crate::error::{check, FactoringError, Result};
use crate::events::{classify, solve_expected_payoff_fixed_point, EventLabel, EventProbabilities, PayoffKind, Regime};
use crate::pricing::{tolerance, DealTerms, ModelTag, PriceResult, ProbabilityTriple};

/// Name of the generator behind every simulation, part of the reproducibility contract.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha), seed_from_u64(seed), stream = block index";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub n_paths: u64,
    pub seed: u64,
    pub worker_count: u32,
    pub confidence_sigmas: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            n_paths: 1_000_000,
            seed: 42,
            worker_count: 8,
            confidence_sigmas: tolerance::MC_SIGMAS,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        check(self.n_paths > 0, "n_paths", self.n_paths as f64, "must be > 0")?;
        check(
            self.worker_count > 0,
            "worker_count",
            self.worker_count as f64,
            "must be > 0",
        )?;
        check(
            self.confidence_sigmas.is_finite() && self.confidence_sigmas > 0.0,
            "confidence_sigmas",
            self.confidence_sigmas,
            "must be finite and > 0",
        )
    }

    /// Half-open path range of block `index`.
    fn block(&self, index: u32) -> (u64, u64) {
        let w = self.worker_count as u64;
        let i = index as u64;
        let lo = (self.n_paths as u128 * i as u128 / w as u128) as u64;
        let hi = (self.n_paths as u128 * (i + 1) as u128 / w as u128) as u64;
        (lo, hi)
    }
}

/// Generator for block `block` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

pub type EventCounts = BTreeMap<EventLabel, u64>;

#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_paths: u64,
    pub per_event_counts: EventCounts,
}

/// Class frequencies of the revocatory events.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleEstimate {
    pub debtor_default_no_clawback: McEstimate,
    pub joint_survival: McEstimate,
    pub clawback: McEstimate,
}

impl TripleEstimate {
    pub fn triple(&self) -> ProbabilityTriple {
        ProbabilityTriple {
            p_debtor_default_no_clawback: self.debtor_default_no_clawback.value,
            p_joint_survival: self.joint_survival.value,
            p_clawback: self.clawback.value,
        }
    }

    pub fn per_event_counts(&self) -> &EventCounts {
        &self.clawback.per_event_counts
    }

    pub fn n_paths(&self) -> u64 {
        self.clawback.n_paths
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McPrice {
    pub result: PriceResult,
    pub estimate: McEstimate,
}

/// Counts of all twelve revocatory events over `cfg.n_paths` simulated pairs.
pub fn simulate_event_counts(
    lam_a: &MarginalIntensity,
    lam_b: &MarginalIntensity,
    dep: &GumbelDependence,
    terms: &DealTerms,
    cfg: &McConfig,
) -> Result<EventCounts> {
    terms.validate()?;
    cfg.validate()?;
    let sampler = PairSampler::new(lam_a, lam_b, dep);
    let labels = EventLabel::all(Regime::Revocatory);
    let blocks: Vec<Vec<u64>> = (0..cfg.worker_count)
        .into_par_iter()
        .map(|b| {
            let (lo, hi) = cfg.block(b);
            let mut rng = stream_rng(cfg.seed, b as u64);
            let mut counts = vec![0u64; labels.len()];
            for _ in lo..hi {
                let label = loop {
                    let pair = sampler.sample(&mut rng);
                    match classify(pair.tau_a, pair.tau_b, terms, Regime::Revocatory) {
                        Ok(label) => break label,
                        Err(FactoringError::Tie(_)) => continue,
                        Err(e) => unreachable!("sampled times are valid: {e}"),
                    }
                };
                counts[label_index(&label)] += 1;
            }
            counts
        })
        .collect();

    let mut out: EventCounts = labels.iter().map(|l| (*l, 0)).collect();
    for counts in blocks {
        for (label, n) in labels.iter().zip(counts) {
            *out.get_mut(label).unwrap() += n;
        }
    }
    Ok(out)
}

fn label_index(label: &EventLabel) -> usize {
    let order = crate::events::DefaultOrder::ALL
        .iter()
        .position(|o| *o == label.order)
        .unwrap();
    order + if label.clawback { 6 } else { 0 }
}

fn frequencies(counts: &EventCounts, n: u64) -> EventProbabilities {
    counts.iter().map(|(l, &k)| (*l, k as f64 / n as f64)).collect()
}

fn binomial(k: u64, n: u64, counts: &EventCounts) -> McEstimate {
    let p = k as f64 / n as f64;
    McEstimate {
        value: p,
        std_error: (p * (1.0 - p) / n as f64).sqrt(),
        n_paths: n,
        per_event_counts: counts.clone(),
    }
}

/// Frequencies of the three payoff classes.
pub fn estimate_triple(
    lam_a: &MarginalIntensity,
    lam_b: &MarginalIntensity,
    dep: &GumbelDependence,
    terms: &DealTerms,
    cfg: &McConfig,
) -> Result<TripleEstimate> {
    let counts = simulate_event_counts(lam_a, lam_b, dep, terms, cfg)?;
    Ok(triple_from_counts(&counts))
}

fn triple_from_counts(counts: &EventCounts) -> TripleEstimate {
    let n: u64 = counts.values().sum();
    let class = |kind: PayoffKind| -> u64 {
        counts
            .iter()
            .filter(|(l, _)| l.payoff_kind() == kind)
            .map(|(_, k)| k)
            .sum()
    };
    TripleEstimate {
        debtor_default_no_clawback: binomial(class(PayoffKind::RecoveryB), n, counts),
        joint_survival: binomial(class(PayoffKind::Full), n, counts),
        clawback: binomial(class(PayoffKind::Clawback), n, counts),
    }
}

/// Revocatory price from simulated event frequencies.
///
/// The standard error is the delta-method propagation of the multinomial
/// covariance of the class frequencies through the fixed point: with
/// `D = 1 - (1 + r_A) p_c` the gradient component of class `k` is
/// `payoff_k(price) / D`.
pub fn mc_price(
    lam_a: &MarginalIntensity,
    lam_b: &MarginalIntensity,
    dep: &GumbelDependence,
    terms: &DealTerms,
    cfg: &McConfig,
) -> Result<McPrice> {
    let counts = simulate_event_counts(lam_a, lam_b, dep, terms, cfg)?;
    price_from_counts(&counts, terms)
}

pub(crate) fn price_from_counts(counts: &EventCounts, terms: &DealTerms) -> Result<McPrice> {
    let n: u64 = counts.values().sum();
    let mut result = solve_expected_payoff_fixed_point(&frequencies(counts, n), terms)?;
    result.model_tag = ModelTag::RevocatoryMc;

    let tr = result.triple;
    let denominator = 1.0 - (1.0 + terms.recovery_a) * tr.p_clawback;
    let classes = [
        (tr.p_debtor_default_no_clawback, PayoffKind::RecoveryB),
        (tr.p_joint_survival, PayoffKind::Full),
        (tr.p_clawback, PayoffKind::Clawback),
    ];
    let (mut m1, mut m2) = (0.0, 0.0);
    for (p, kind) in classes {
        let g = kind.amount(result.price, terms) / denominator;
        m1 += p * g;
        m2 += p * g * g;
    }
    let variance = ((m2 - m1 * m1) / n as f64).max(0.0);
    Ok(McPrice {
        estimate: McEstimate {
            value: result.price,
            std_error: variance.sqrt(),
            n_paths: n,
            per_event_counts: counts.clone(),
        },
        result,
    })
}

/// Debtor-only price by simulating `tau_B` alone.
///
/// Paths are tallied under the plain-regime labels with a riskless assignor,
/// so they land in `(c)` (debtor defaults) or `(e)` (debtor pays).
pub fn mc_standard_price(lam_b: &MarginalIntensity, terms: &DealTerms, cfg: &McConfig) -> Result<McPrice> {
    terms.validate()?;
    cfg.validate()?;
    let riskless = MarginalIntensity::riskless();
    let sampler = PairSampler::new(&riskless, lam_b, &GumbelDependence::independent());
    let defaults: u64 = (0..cfg.worker_count)
        .into_par_iter()
        .map(|b| {
            let (lo, hi) = cfg.block(b);
            let mut rng = stream_rng(cfg.seed, b as u64);
            let mut k = 0u64;
            for _ in lo..hi {
                let tau_b = loop {
                    let t = sampler.sample(&mut rng).tau_b;
                    if t != terms.maturity_t {
                        break t;
                    }
                };
                k += u64::from(tau_b < terms.maturity_t);
            }
            k
        })
        .sum();

    let n = cfg.n_paths;
    let c = terms.face_value_c;
    let loss = c * (1.0 - terms.recovery_b);
    let p = defaults as f64 / n as f64;
    let price = c - loss * p;
    let sample_var = if n > 1 {
        p * (1.0 - p) * n as f64 / (n - 1) as f64
    } else {
        0.0
    };

    let mut counts = EventCounts::new();
    let default_label = classify(BEYOND_HORIZON, 0.0, terms, Regime::Plain)?;
    let survive_label = classify(BEYOND_HORIZON, f64::MAX / 2.0, terms, Regime::Plain)?;
    counts.insert(default_label, defaults);
    counts.insert(survive_label, n - defaults);

    Ok(McPrice {
        result: PriceResult::new(price, c, ProbabilityTriple::without_clawback(p), ModelTag::StandardMc),
        estimate: McEstimate {
            value: price,
            std_error: loss * (sample_var / n as f64).sqrt(),
            n_paths: n,
            per_event_counts: counts,
        },
    })
}
