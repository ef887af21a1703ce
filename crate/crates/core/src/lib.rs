//! Pricing of non-recourse invoice factoring.
//!
//! The factor buys an invoice of face value `C` due at `T`. Under the
//! standard model only the debtor's default matters. Under the bankruptcy
//! revocatory the sale is unwound when the assignor defaults within the
//! suspect period `delta`, and assignor and debtor default times are coupled
//! by a Gumbel copula over exponential marginals.
//!
//! * [`dependence`]: marginals, copula, density and an exact pair sampler.
//! * [`pricing`]: closed-form standard and revocatory prices.
//! * [`events`]: the event taxonomy and the price fixed point.
//! * [`montecarlo`]: the simulation oracle with standard errors.
//! * [`scenario`], [`report`], [`tables`], [`sweep`]: the front end behind
//!   the `factoring` binary.

pub mod dependence;
pub mod error;
pub mod events;
pub mod montecarlo;
pub mod pricing;
pub mod report;
pub mod scenario;
pub mod stats;
pub mod sweep;
pub mod tables;

pub use dependence::{
    joint_cdf, joint_density, joint_survival, kendall_tau_from_theta, sample_pair, theta_from_kendall_tau,
    theta_power_mean, DefaultTimePair, GumbelDependence, MarginalIntensity, PairSampler,
};
pub use error::{FactoringError, Result};
pub use events::{aggregate_to_triple, classify, solve_expected_payoff_fixed_point, EventLabel, PayoffKind, Regime};
pub use montecarlo::{estimate_triple, mc_price, mc_standard_price, McConfig, McEstimate, McPrice};
pub use pricing::{
    probability_triple_closed, profitability_bound, revocatory_price_closed, revocatory_price_from_probs,
    standard_price, standard_price_exponential, DealTerms, ModelTag, PriceResult, ProbabilityTriple,
};
