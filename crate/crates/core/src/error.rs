use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FactoringError {
    /// An argument fell outside the domain of the operation.
    #[error("domain error: {name} = {value} ({constraint})")]
    Domain {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// The joint density was requested on an axis where it is singular.
    #[error("joint density is not defined on the boundary (t_a = {t_a}, t_b = {t_b}, theta = {theta})")]
    DensityBoundary { t_a: f64, t_b: f64, theta: f64 },

    /// `1 - (1 + r_A) P(tau_A < delta) <= 0`: no finite positive price solves the fixed point.
    #[error("degenerate deal: clawback denominator {denominator} is not positive")]
    DegenerateDeal { denominator: f64 },

    /// A default time coincided with T, delta, or the other default time.
    #[error("tie in event classification: {0}")]
    Tie(&'static str),

    #[error("invalid event probabilities: {0}")]
    EventProbabilities(String),
}

pub type Result<T> = std::result::Result<T, FactoringError>;

pub(crate) fn check(cond: bool, name: &'static str, value: f64, constraint: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(FactoringError::Domain {
            name,
            value,
            constraint,
        })
    }
}
