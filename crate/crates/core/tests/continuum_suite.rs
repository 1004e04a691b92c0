use pairstab::chain::make_v;
use pairstab::continuum::{autocorr_f, energy_atomic, pair_mu_d, ENERGY_PATH_TOL};
use pairstab::{AtomicMeasure, BumpFunction, ContinuumPotential};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Composite Simpson rule, independent of the library quadrature.
fn simpson(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + inner + f(b)) * h / 3.0
}

#[test]
fn autocorrelation_at_zero() {
    let oracle = simpson(-0.5, 0.5, 2000, |y| (PI * y).cos().powi(2));
    assert!((oracle - 0.5).abs() < 1e-12);
    let f = BumpFunction::cosine();
    assert!((autocorr_f(&f, 0.0) - oracle).abs() < 1e-12);
    for t in [0.1, 0.37, 0.8] {
        let q = simpson(-0.5, 0.5 - t, 2000, |y| f.eval(y) * f.eval(y + t));
        assert!((autocorr_f(&f, t) - q).abs() < 1e-10, "t={t}");
    }
    assert_eq!(autocorr_f(&f, 1.0), 0.0);
}

#[test]
fn lattice_consistency_and_continuity() {
    let w = ContinuumPotential::chain(BumpFunction::cosine());
    let v = make_v::<f64>();
    for m in -4..=4 {
        let want = v.value(m) * 0.5;
        assert!((w.eval(m as f64) - want).abs() < 1e-12, "m={m}");
    }
    let d = 1e-12;
    assert!((w.eval(0.5 - d) - w.eval(0.5 + d)).abs() < 1e-10);
    for x in [0.3, 1.7, 2.2] {
        assert_eq!(w.eval(x), w.eval(-x));
    }
    for x in [3.0, 3.5, -4.0] {
        assert_eq!(w.eval(x), 0.0);
    }
}

#[test]
fn pairing_independent_of_truncation() {
    let w = ContinuumPotential::chain(BumpFunction::cosine());
    let want = (2.0 - 5f64.sqrt()) / 2.0;
    for p in [0, 1, 3] {
        assert!((pair_mu_d(&w, p) - want).abs() < 1e-10);
    }
}

#[test]
fn random_atomic_configurations_are_stable() {
    let w = ContinuumPotential::chain(BumpFunction::cosine());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let n = rng.gen_range(1..=20);
        let points: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
        let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
        let rho = AtomicMeasure::new(points, weights).unwrap();
        let e = energy_atomic(&rho, &w).unwrap();
        assert!(e.double_sum >= -1e-9);
        assert!((e.double_sum - e.smoothed).abs() <= ENERGY_PATH_TOL * e.double_sum.abs().max(1.0));
    }
    let pair = AtomicMeasure::unit(vec![0.0, 1.0]).unwrap();
    assert!(energy_atomic(&pair, &w).unwrap().double_sum.abs() < 1e-12);
}
