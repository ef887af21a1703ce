mod common;

use factoring::events::DefaultOrder;
use factoring::montecarlo::{simulate_event_counts, stream_rng, RNG_ALGORITHM};
use factoring::{
    classify, estimate_triple, mc_price, mc_standard_price, probability_triple_closed, revocatory_price_closed,
    solve_expected_payoff_fixed_point, DealTerms, EventLabel, GumbelDependence, MarginalIntensity, McConfig,
    PairSampler, PayoffKind, Regime,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn lam(x: f64) -> MarginalIntensity {
    MarginalIntensity::new(x).unwrap()
}

fn dep(theta: f64) -> GumbelDependence {
    GumbelDependence::new(theta).unwrap()
}

fn table1() -> DealTerms {
    DealTerms::new(100.0, 1.0, 0.5, 0.2, 0.2).unwrap()
}

fn table2() -> DealTerms {
    DealTerms::new(100.0, 0.5, 1.0, 0.2, 0.2).unwrap()
}

fn cfg(n_paths: u64, seed: u64) -> McConfig {
    McConfig {
        n_paths,
        seed,
        ..McConfig::default()
    }
}

fn within(got: f64, want: f64, se: f64) {
    assert!(se > 0.0);
    assert!((got - want).abs() < 4.0 * se, "{got} vs {want} (se {se})");
}

#[test]
fn first_samples_are_frozen() {
    const GOLDEN: [(u64, u64); 8] = [
        (0x401a760bc591c245, 0x400350c9dede763f),
        (0x4022716b19cdce73, 0x4026c9f0e6b2ed59),
        (0x40025625a9248b0a, 0x401588e9a99945f2),
        (0x40022dd1772caad2, 0x401f56c2f81956f3),
        (0x403246a4870bca32, 0x40405069eb003867),
        (0x4033d0c4f057dba6, 0x402ef0cfdfcb59d7),
        (0x4012dd66df113688, 0x40083259db75b1d6),
        (0x4022be6763b972d3, 0x4022635ca83ef167),
    ];
    assert!(RNG_ALGORITHM.starts_with("ChaCha8"));
    let sampler = PairSampler::new(&lam(0.1), &lam(0.1), &dep(2.0));
    let mut rng = stream_rng(42, 0);
    for (a, b) in GOLDEN {
        let p = sampler.sample(&mut rng);
        assert_eq!((p.tau_a.to_bits(), p.tau_b.to_bits()), (a, b));
    }
}

#[test]
fn identical_config_gives_identical_counts() {
    let c = cfg(200_000, 7);
    let a = simulate_event_counts(&lam(0.2), &lam(0.1), &dep(3.0), &table1(), &c).unwrap();
    let b = simulate_event_counts(&lam(0.2), &lam(0.1), &dep(3.0), &table1(), &c).unwrap();
    assert_eq!(a, b);
    let other = simulate_event_counts(&lam(0.2), &lam(0.1), &dep(3.0), &table1(), &cfg(200_000, 8)).unwrap();
    assert_ne!(a, other);
}

#[test]
fn counts_partition_the_paths() {
    for (n, workers) in [(1, 8), (7, 3), (100_003, 8), (50_000, 1)] {
        let c = McConfig {
            worker_count: workers,
            ..cfg(n, 3)
        };
        let counts = simulate_event_counts(&lam(0.3), &lam(0.2), &dep(2.0), &table1(), &c).unwrap();
        assert_eq!(counts.len(), 12);
        assert_eq!(counts.values().sum::<u64>(), n);
        let est = estimate_triple(&lam(0.3), &lam(0.2), &dep(2.0), &table1(), &c).unwrap();
        assert_eq!(est.triple().sum(), 1.0);
        assert_eq!(est.n_paths(), n);
    }
}

#[test]
fn std_error_scales_with_inverse_root_paths() {
    for seed in [1, 2, 3] {
        let small = mc_price(&lam(0.1), &lam(0.1), &dep(2.0), &table1(), &cfg(62_500, seed)).unwrap();
        let large = mc_price(&lam(0.1), &lam(0.1), &dep(2.0), &table1(), &cfg(1_000_000, seed)).unwrap();
        let ratio = small.estimate.std_error / large.estimate.std_error;
        assert!((ratio / 4.0 - 1.0).abs() < 0.2, "seed {seed}: ratio {ratio}");
    }
}

#[test]
fn triple_estimates_match_closed_form() {
    let c = cfg(1_000_000, 42);
    let est = estimate_triple(&lam(0.1), &lam(0.1), &dep(1.0), &table1(), &c).unwrap();
    within(est.clawback.value, 1.0 - (-0.05f64).exp(), est.clawback.std_error);

    for theta in [1.0, 2.0] {
        let est = estimate_triple(&lam(0.1), &lam(0.1), &dep(theta), &table1(), &c).unwrap();
        let tr = probability_triple_closed(&lam(0.1), &lam(0.1), &dep(theta), &table1()).unwrap();
        within(
            est.joint_survival.value,
            tr.p_joint_survival,
            est.joint_survival.std_error,
        );
        within(
            est.debtor_default_no_clawback.value,
            tr.p_debtor_default_no_clawback,
            est.debtor_default_no_clawback.std_error,
        );
        within(est.clawback.value, tr.p_clawback, est.clawback.std_error);
    }
}

#[test]
fn riskless_assignor_never_claws_back() {
    for seed in 0..5 {
        let est = estimate_triple(
            &MarginalIntensity::riskless(),
            &lam(0.1),
            &dep(2.0),
            &table1(),
            &cfg(100_000, seed),
        )
        .unwrap();
        assert_eq!(est.clawback.value, 0.0);
    }
}

#[test]
fn mc_prices_match_reference_cells() {
    let c = cfg(1_000_000, 42);
    let p = mc_price(&lam(0.1), &lam(0.1), &dep(1.0), &table1(), &c).unwrap();
    within(p.result.price, 88.164, p.estimate.std_error);
    let p = mc_price(&lam(0.2), &lam(0.1), &dep(5.0), &table2(), &c).unwrap();
    within(p.result.price, 81.46387, p.estimate.std_error);
    let p = mc_price(&MarginalIntensity::riskless(), &lam(0.1), &dep(3.0), &table1(), &c).unwrap();
    within(p.result.price, 92.387, p.estimate.std_error);
}

#[test]
fn mc_standard_prices() {
    let c = cfg(1_000_000, 42);
    let p = mc_standard_price(&lam(0.1), &table1(), &c).unwrap();
    within(p.result.price, 92.387, p.estimate.std_error);
    let p = mc_standard_price(&lam(0.1), &table2(), &c).unwrap();
    within(p.result.price, 96.09835, p.estimate.std_error);
    assert_eq!(p.estimate.per_event_counts.values().sum::<u64>(), c.n_paths);

    let full = DealTerms::new(100.0, 1.0, 0.5, 0.2, 1.0).unwrap();
    let p = mc_standard_price(&lam(0.5), &full, &cfg(10_000, 1)).unwrap();
    assert_eq!(p.result.price, 100.0);
    assert_eq!(p.estimate.std_error, 0.0);
}

#[test]
fn event_frequencies_solve_to_reference_price() {
    let c = cfg(1_000_000, 42);
    let counts = simulate_event_counts(&lam(0.1), &lam(0.1), &dep(2.0), &table1(), &c).unwrap();
    let freqs = counts.iter().map(|(l, &k)| (*l, k as f64 / c.n_paths as f64)).collect();
    let from_events = solve_expected_payoff_fixed_point(&freqs, &table1()).unwrap();
    let mc = mc_price(&lam(0.1), &lam(0.1), &dep(2.0), &table1(), &c).unwrap();
    assert_eq!(from_events.price, mc.result.price);
    within(from_events.price, 91.011, mc.estimate.std_error);
}

#[test]
fn every_reference_cell_agrees_with_simulation() {
    let c = cfg(1_000_000, 42);
    for terms in [table1(), table2()] {
        for la in [0.1, 0.2] {
            for theta in [1.0, 2.0, 3.0, 4.0, 5.0] {
                let closed = revocatory_price_closed(&lam(la), &lam(0.1), &dep(theta), &terms).unwrap();
                let mc = mc_price(&lam(la), &lam(0.1), &dep(theta), &terms, &c).unwrap();
                within(mc.result.price, closed.price, mc.estimate.std_error);
            }
        }
    }
}

#[test]
fn classify_is_exhaustive_and_exclusive() {
    let mut rng = stream_rng(99, 0);
    let mut seen = std::collections::BTreeMap::new();
    for _ in 0..100_000 {
        let t: f64 = rng.random_range(0.01..3.0);
        let delta: f64 = rng.random_range(0.01..3.0);
        let (a, b): (f64, f64) = (rng.random_range(0.0..4.0), rng.random_range(0.0..4.0));
        let terms = DealTerms::new(100.0, t, delta, 0.2, 0.2).unwrap();
        let label = classify(a, b, &terms, Regime::Revocatory).unwrap();
        let matches: Vec<EventLabel> = EventLabel::all(Regime::Revocatory)
            .into_iter()
            .filter(|l| holds(l, a, b, t, delta))
            .collect();
        assert_eq!(matches, vec![label], "({a}, {b}, {t}, {delta})");
        *seen.entry(label).or_insert(0u32) += 1;
    }
    assert_eq!(seen.len(), 12);
}

fn holds(l: &EventLabel, a: f64, b: f64, t: f64, delta: f64) -> bool {
    let order = match l.order {
        DefaultOrder::AssignorDebtorMaturity => a < b && b < t,
        DefaultOrder::DebtorAssignorMaturity => b < a && a < t,
        DefaultOrder::DebtorMaturityAssignor => b < t && t < a,
        DefaultOrder::AssignorMaturityDebtor => a < t && t < b,
        DefaultOrder::MaturityDebtorAssignor => t < b && b < a,
        DefaultOrder::MaturityAssignorDebtor => t < a && a < b,
    };
    order && l.clawback == (a < delta)
}

#[test]
fn plain_payoff_ignores_the_assignor() {
    let terms = table1();
    let sampler = PairSampler::new(&lam(0.3), &lam(0.2), &dep(4.0));
    let mut rng = stream_rng(5, 0);
    let pairs: Vec<_> = (0..20_000).map(|_| sampler.sample(&mut rng)).collect();
    let mean_payoff = |a: &[f64]| -> f64 {
        a.iter()
            .zip(&pairs)
            .map(|(&ta, p)| {
                let l = classify(ta, p.tau_b, &terms, Regime::Plain).unwrap();
                l.payoff_kind().amount(0.0, &terms)
            })
            .sum::<f64>()
            / pairs.len() as f64
    };
    let mut tau_a: Vec<f64> = pairs.iter().map(|p| p.tau_a).collect();
    let before = mean_payoff(&tau_a);
    let mut shuffler = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5 {
        tau_a.shuffle(&mut shuffler);
        assert_eq!(mean_payoff(&tau_a), before);
    }
    let labels = EventLabel::all(Regime::Plain);
    assert!(labels.iter().all(|l| l.payoff_kind() != PayoffKind::Clawback));
}
