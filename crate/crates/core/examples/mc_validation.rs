//! Checks a closed-form price against simulation.
//!
//! cargo run --release --example mc_validation

use factoring::{
    estimate_triple, mc_price, probability_triple_closed, revocatory_price_closed, DealTerms, GumbelDependence,
    MarginalIntensity, McConfig,
};

fn main() -> factoring::Result<()> {
    let terms = DealTerms::new(100.0, 0.5, 1.0, 0.2, 0.2)?;
    let (la, lb) = (MarginalIntensity::new(0.2)?, MarginalIntensity::new(0.1)?);
    let dep = GumbelDependence::new(3.0)?;
    let cfg = McConfig::default();

    let closed = revocatory_price_closed(&la, &lb, &dep, &terms)?;
    let mc = mc_price(&la, &lb, &dep, &terms, &cfg)?;
    let z = (mc.result.price - closed.price) / mc.estimate.std_error;
    println!("closed {:.5}", closed.price);
    println!(
        "mc     {:.5} +- {:.5}  (z = {z:.2}, {} paths)",
        mc.result.price, mc.estimate.std_error, cfg.n_paths
    );

    let tr = probability_triple_closed(&la, &lb, &dep, &terms)?;
    let est = estimate_triple(&la, &lb, &dep, &terms, &cfg)?;
    for (name, exact, e) in [
        ("p_a", tr.p_debtor_default_no_clawback, &est.debtor_default_no_clawback),
        ("p_b", tr.p_joint_survival, &est.joint_survival),
        ("p_c", tr.p_clawback, &est.clawback),
    ] {
        println!("{name} {exact:.6} vs {:.6} +- {:.6}", e.value, e.std_error);
    }
    Ok(())
}
