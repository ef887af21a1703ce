//! One-parameter sensitivity sweeps of the closed-form revocatory price.

use crate::dependence::{GumbelDependence, MarginalIntensity};
use crate::error::{check, Result};
use crate::report::{price_deal, ModelSelection, ResultRow};
use crate::scenario::{Deal, DependenceInput};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Theta,
    LambdaA,
    LambdaB,
    Delta,
    T,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::Theta => "theta",
            SweepParam::LambdaA => "lambda_a",
            SweepParam::LambdaB => "lambda_b",
            SweepParam::Delta => "delta",
            SweepParam::T => "t",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub param: SweepParam,
    pub rows: Vec<ResultRow>,
    /// Over the rows that priced successfully.
    pub nondecreasing: bool,
    pub nonincreasing: bool,
}

impl SweepReport {
    pub fn footer(&self) -> String {
        let failed = self.rows.iter().filter(|r| r.error.is_some()).count();
        format!(
            "sweep {}: {} points, {} failed, nondecreasing={}, nonincreasing={}",
            self.param.name(),
            self.rows.len(),
            failed,
            self.nondecreasing,
            self.nonincreasing
        )
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        check(self.steps >= 2, "steps", self.steps as f64, "must be >= 2")?;
        check(self.from.is_finite(), "from", self.from, "must be finite")?;
        check(self.to.is_finite(), "to", self.to, "must be finite")
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == n {
                    self.to
                } else {
                    self.from + (self.to - self.from) * i as f64 / n as f64
                }
            })
            .collect()
    }
}

fn with_param(base: &Deal, param: SweepParam, x: f64) -> Result<Deal> {
    let mut deal = base.clone();
    match param {
        SweepParam::Theta => {
            deal.dependence = GumbelDependence::new(x)?;
            deal.dependence_input = DependenceInput::Theta(x);
        }
        SweepParam::LambdaA => deal.lambda_a = MarginalIntensity::new(x)?,
        SweepParam::LambdaB => deal.lambda_b = MarginalIntensity::new(x)?,
        SweepParam::Delta => deal.terms.suspect_period_delta = x,
        SweepParam::T => deal.terms.maturity_t = x,
    }
    deal.terms.validate()?;
    deal.id = format!("{}@{}={}", base.id, param.name(), x);
    Ok(deal)
}

/// Prices `base` at each grid point of `spec`. Invalid or degenerate points
/// produce error rows and the sweep continues.
pub fn run_sweep(base: &Deal, spec: &SweepSpec) -> Result<SweepReport> {
    spec.validate()?;
    let mut rows = Vec::with_capacity(spec.steps);
    for x in spec.points() {
        match with_param(base, spec.param, x) {
            Ok(deal) => rows.extend(price_deal(&deal, ModelSelection::Revocatory, None)),
            Err(e) => {
                let mut row = price_deal(base, ModelSelection::Revocatory, None).remove(0);
                row.id = format!("{}@{}={}", base.id, spec.param.name(), x);
                row.price = None;
                row.implied_alpha = None;
                row.p_default_no_clawback = None;
                row.p_joint_survival = None;
                row.p_clawback = None;
                row.error = Some(e.to_string());
                rows.push(row);
            }
        }
    }
    let prices: Vec<f64> = rows.iter().filter_map(|r| r.price).collect();
    let nondecreasing = prices.windows(2).all(|w| w[1] >= w[0] - 1e-12 * w[0].abs());
    let nonincreasing = prices.windows(2).all(|w| w[1] <= w[0] + 1e-12 * w[0].abs());
    Ok(SweepReport {
        param: spec.param,
        rows,
        nondecreasing,
        nonincreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pricing::DealTerms;

    fn base() -> Deal {
        Deal {
            id: "base".into(),
            terms: DealTerms::new(100.0, 1.0, 0.5, 0.2, 0.2).unwrap(),
            lambda_a: MarginalIntensity::new(0.1).unwrap(),
            lambda_b: MarginalIntensity::new(0.1).unwrap(),
            dependence: GumbelDependence::independent(),
            dependence_input: DependenceInput::Theta(1.0),
        }
    }

    #[test]
    fn points_hit_endpoints() {
        let s = SweepSpec {
            param: SweepParam::Theta,
            from: 1.0,
            to: 5.0,
            steps: 5,
        };
        assert_eq!(s.points(), vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        assert!(SweepSpec { steps: 1, ..s }.validate().is_err());
    }

    #[test]
    fn invalid_points_become_error_rows() {
        let s = SweepSpec {
            param: SweepParam::Theta,
            from: 0.5,
            to: 2.0,
            steps: 4,
        };
        let report = run_sweep(&base(), &s).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert!(report.rows[0].error.is_some());
        assert!(report.rows[1..].iter().all(|r| r.price.is_some()));
        assert!(report.nondecreasing);
    }
}
