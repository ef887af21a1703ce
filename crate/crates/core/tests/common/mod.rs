//! Independent oracles shared by the integration tests.

#![allow(dead_code, clippy::excessive_precision)]

use factoring::montecarlo::stream_rng;
use factoring::{DefaultTimePair, GumbelDependence, MarginalIntensity, PairSampler};

const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const K_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const G_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Gauss-Kronrod 7/15 on one interval: (kronrod estimate, |kronrod - gauss|).
fn gk15(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = K_WEIGHTS[7] * fc;
    let mut g = G_WEIGHTS[3] * fc;
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        k += K_WEIGHTS[i] * s;
        if i % 2 == 1 {
            g += G_WEIGHTS[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Recursive adaptive Gauss-Kronrod quadrature with absolute tolerance `tol`.
pub fn integrate(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, tol: f64, whole: (f64, f64), depth: u32) -> f64 {
        if whole.1 <= tol || depth >= 60 {
            return whole.0;
        }
        let m = 0.5 * (a + b);
        let left = gk15(f, a, m);
        let right = gk15(f, m, b);
        rec(f, a, m, 0.5 * tol, left, depth + 1) + rec(f, m, b, 0.5 * tol, right, depth + 1)
    }
    let whole = gk15(f, a, b);
    rec(f, a, b, tol, whole, 0)
}

/// Relative error of `got` against `want`.
pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

/// Sequential draws from one stream, independent of the parallel MC engine.
pub fn draw_pairs(lam_a: f64, lam_b: f64, theta: f64, n: usize, seed: u64) -> Vec<DefaultTimePair> {
    let sampler = PairSampler::new(
        &MarginalIntensity::new(lam_a).unwrap(),
        &MarginalIntensity::new(lam_b).unwrap(),
        &GumbelDependence::new(theta).unwrap(),
    );
    let mut rng = stream_rng(seed, 0);
    (0..n).map(|_| sampler.sample(&mut rng)).collect()
}

/// Frequency of `pred` over `pairs` and its binomial standard error.
pub fn frequency(pairs: &[DefaultTimePair], pred: impl Fn(&DefaultTimePair) -> bool) -> (f64, f64) {
    let n = pairs.len() as f64;
    let p = pairs.iter().filter(|p| pred(p)).count() as f64 / n;
    (p, (p * (1.0 - p) / n).sqrt())
}
