//! Tallies simulated paths per event and rebuilds the price from the
//! event frequencies.
//!
//! cargo run --release --example event_taxonomy

use factoring::montecarlo::simulate_event_counts;
use factoring::{
    classify, solve_expected_payoff_fixed_point, DealTerms, GumbelDependence, MarginalIntensity, McConfig, Regime,
};

fn main() -> factoring::Result<()> {
    let terms = DealTerms::new(100.0, 1.0, 0.5, 0.2, 0.2)?;
    let label = classify(0.3, 0.6, &terms, Regime::Revocatory)?;
    println!("(0.3, 0.6) -> ({}) {:?}", label.letter(), label.payoff_kind());

    let cfg = McConfig::default();
    let (l, dep) = (MarginalIntensity::new(0.1)?, GumbelDependence::new(2.0)?);
    let counts = simulate_event_counts(&l, &l, &dep, &terms, &cfg)?;
    for (label, k) in &counts {
        println!(
            "({}) {:?} clawback={} {:?}: {k}",
            label.letter(),
            label.order,
            label.clawback,
            label.payoff_kind()
        );
    }
    let probs = counts
        .iter()
        .map(|(l, &k)| (*l, k as f64 / cfg.n_paths as f64))
        .collect();
    let price = solve_expected_payoff_fixed_point(&probs, &terms)?;
    println!("price from event frequencies {:.4}", price.price);
    Ok(())
}
