//! Sweeps dependence and assignor risk on a base deal.
//!
//! cargo run --example sensitivity_sweep

use factoring::scenario::{Deal, DependenceInput};
use factoring::sweep::{run_sweep, SweepParam, SweepSpec};
use factoring::{DealTerms, GumbelDependence, MarginalIntensity};

fn main() -> factoring::Result<()> {
    let base = Deal {
        id: "base".into(),
        terms: DealTerms::new(100.0, 1.0, 0.5, 0.2, 0.2)?,
        lambda_a: MarginalIntensity::new(0.2)?,
        lambda_b: MarginalIntensity::new(0.1)?,
        dependence: GumbelDependence::independent(),
        dependence_input: DependenceInput::Theta(1.0),
    };
    for spec in [
        SweepSpec {
            param: SweepParam::Theta,
            from: 1.0,
            to: 10.0,
            steps: 10,
        },
        SweepSpec {
            param: SweepParam::LambdaA,
            from: 0.0,
            to: 1.0,
            steps: 11,
        },
    ] {
        let report = run_sweep(&base, &spec)?;
        for row in &report.rows {
            match row.price {
                Some(p) => println!("{:<20} {p:.5}", row.id),
                None => println!("{:<20} {}", row.id, row.error.as_deref().unwrap_or("")),
            }
        }
        println!("{}\n", report.footer());
    }
    Ok(())
}
