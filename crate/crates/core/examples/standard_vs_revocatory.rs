//! Prices one invoice with and without the assignor clawback.
//!
//! cargo run --example standard_vs_revocatory

use factoring::{
    probability_triple_closed, profitability_bound, revocatory_price_closed, standard_price_exponential, DealTerms,
    GumbelDependence, MarginalIntensity,
};

fn main() -> factoring::Result<()> {
    let terms = DealTerms::new(100.0, 1.0, 0.5, 0.2, 0.2)?;
    let debtor = MarginalIntensity::new(0.1)?;
    let assignor = MarginalIntensity::new(0.2)?;

    let standard = standard_price_exponential(&debtor, &terms)?;
    println!(
        "standard price      {:.5}  (alpha {:.5})",
        standard.price, standard.implied_discount_alpha
    );
    let pd = debtor.default_probability(terms.maturity_t);
    println!("break-even discount {:.5}", profitability_bound(terms.recovery_b, pd)?);

    for theta in [1.0, 2.0, 5.0] {
        let dep = GumbelDependence::new(theta)?;
        let triple = probability_triple_closed(&assignor, &debtor, &dep, &terms)?;
        let rev = revocatory_price_closed(&assignor, &debtor, &dep, &terms)?;
        println!(
            "theta {theta}: revocatory {:.5}  p_a {:.5} p_b {:.5} p_c {:.5}",
            rev.price, triple.p_debtor_default_no_clawback, triple.p_joint_survival, triple.p_clawback
        );
    }
    Ok(())
}
