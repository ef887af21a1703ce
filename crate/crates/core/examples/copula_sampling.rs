//! Draws correlated default times and compares sample statistics with the
//! copula's closed forms.
//!
//! cargo run --release --example copula_sampling

use factoring::montecarlo::stream_rng;
use factoring::stats::kendall_tau;
use factoring::{joint_survival, GumbelDependence, MarginalIntensity, PairSampler};

fn main() -> factoring::Result<()> {
    let la = MarginalIntensity::new(0.1)?;
    let lb = MarginalIntensity::new(0.2)?;
    let n = 200_000;
    for tau in [0.0, 0.5, 0.75] {
        let dep = GumbelDependence::from_kendall_tau(tau)?;
        let sampler = PairSampler::new(&la, &lb, &dep);
        let mut rng = stream_rng(7, 0);
        let pairs: Vec<_> = (0..n).map(|_| sampler.sample(&mut rng)).collect();
        let xs: Vec<f64> = pairs.iter().map(|p| p.tau_a).collect();
        let ys: Vec<f64> = pairs.iter().map(|p| p.tau_b).collect();
        let both = pairs.iter().filter(|p| p.tau_a > 5.0 && p.tau_b > 2.0).count() as f64 / n as f64;
        println!(
            "theta {:.2}: Kendall tau {:.4} (target {tau}), P(tau_A > 5, tau_B > 2) {:.4} vs {:.4}",
            dep.theta(),
            kendall_tau(&xs, &ys).unwrap_or(f64::NAN),
            both,
            joint_survival(5.0, 2.0, &la, &lb, &dep)?
        );
    }
    Ok(())
}
