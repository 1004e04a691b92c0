use pairstab::group::{
    autocorrelate, convolve, cyclic_convolution, dft, inverse_dft, wrap, Spectrum,
};
use pairstab::{golden_conjugate, Density, Density32, LatticePotential, LatticePotential32};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Complex DFT written out term by term.
fn naive(x: &[f64]) -> Vec<(f64, f64)> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter().enumerate().fold((0.0, 0.0), |(re, im), (m, &v)| {
                let t = 2.0 * PI * (k * m) as f64 / n as f64;
                (re + v * t.cos(), im - v * t.sin())
            })
        })
        .collect()
}

fn random_even(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    for k in 0..=n / 2 {
        let x = rng.gen_range(-2.0..2.0);
        v[k] = x;
        v[(n - k) % n] = x;
    }
    v
}

#[test]
fn golden_spectrum() {
    let g = golden_conjugate::<f64>();
    let mu = LatticePotential::cyclic(vec![1.0, g, 0.0, 0.0, g]).unwrap();
    let s = dft(&mu).unwrap();
    let r5 = 5f64.sqrt();
    let want = [r5, (5.0 - r5) / 2.0, 0.0, 0.0, (5.0 - r5) / 2.0];
    for (a, b) in s.coefficients().iter().zip(want) {
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }
}

#[test]
fn v_on_z5_matches_cosine_sums() {
    let v = LatticePotential::cyclic(vec![1.0, -1.0, 1.0, 1.0, -1.0]).unwrap();
    let s = dft(&v).unwrap();
    assert!((s.coefficients()[0] - 1.0).abs() < 1e-15);
    let oracle = naive(v.values());
    for (c, (re, im)) in s.coefficients().iter().zip(oracle) {
        assert!((c - re).abs() < 1e-12 && im.abs() < 1e-12);
    }
    let k1 = 1.0 - 2.0 * (2.0 * PI / 5.0).cos() + 2.0 * (4.0 * PI / 5.0).cos();
    assert!((s.coefficients()[1] - k1).abs() < 1e-12 && k1 < 0.0);
}

#[test]
fn round_trip_and_parseval_up_to_64() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 2..=64 {
        let v = random_even(&mut rng, n);
        let p = LatticePotential::cyclic(v.clone()).unwrap();
        let s = dft(&p).unwrap();
        for (c, (re, im)) in s.coefficients().iter().zip(naive(&v)) {
            assert!((c - re).abs() < 1e-12 && im.abs() < 1e-11, "n={n}");
        }
        let back = inverse_dft(&s).unwrap();
        for (a, b) in back.values().iter().zip(&v) {
            assert!((a - b).abs() < 1e-12, "n={n}");
        }
        let lhs: f64 = v.iter().map(|x| x * x).sum();
        let rhs: f64 = s.coefficients().iter().map(|c| c * c).sum::<f64>() / n as f64;
        assert!((lhs - rhs).abs() < 1e-12 * lhs.max(1.0), "n={n}");
    }
}

#[test]
fn autocorrelation_spectrum_is_power_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let w: Vec<f64> = (0..5).map(|_| rng.gen_range(0.0..3.0)).collect();
        let rho = Density::cyclic(w.clone()).unwrap();
        let s = dft(&autocorrelate(&rho)).unwrap();
        for (c, (re, im)) in s.coefficients().iter().zip(naive(&w)) {
            assert!((c - (re * re + im * im)).abs() < 1e-11);
        }
        for (a, b) in s.coefficients().iter().zip(rho.power_spectrum().unwrap()) {
            assert!((a - b).abs() < 1e-11);
        }
    }
}

#[test]
fn convolution_theorem_on_z5() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let a = LatticePotential::cyclic(random_even(&mut rng, 5)).unwrap();
        let b = LatticePotential::cyclic(random_even(&mut rng, 5)).unwrap();
        let c = convolve(&a, &b).unwrap();
        let (sa, sb, sc) = (dft(&a).unwrap(), dft(&b).unwrap(), dft(&c).unwrap());
        for k in 0..5 {
            let prod = sa.coefficients()[k] * sb.coefficients()[k];
            assert!((sc.coefficients()[k] - prod).abs() < 1e-11);
        }
    }
    assert!(cyclic_convolution(&[1.0, 2.0], &[1.0]).is_err());
}

#[test]
fn wrap_conserves_mass() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let half: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let p = LatticePotential::line_from_half(&half).unwrap();
        let w = wrap(&p, 5).unwrap();
        assert!((w.sum() - p.sum()).abs() < 1e-12);
        // the fold of an even kernel stays even
        assert!((w.value(1) - w.value(4)).abs() < 1e-12);
    }
}

#[test]
fn inverse_of_spectrum_constructor() {
    let s = Spectrum::new(vec![5.0f64, 0.0, 0.0, 0.0, 0.0]);
    let p = s.inverse().unwrap();
    assert!(p.values().iter().all(|&v| (v - 1.0).abs() < 1e-15));
}

#[test]
fn single_precision_aliases() {
    let g = golden_conjugate::<f32>();
    let mu = LatticePotential32::cyclic(vec![1.0, g, 0.0, 0.0, g]).unwrap();
    let s = dft(&mu).unwrap();
    assert!((s.coefficients()[0] - 5f32.sqrt()).abs() < 1e-5);
    assert!(s.coefficients()[2].abs() < 1e-5);
    let rho = Density32::cyclic(vec![1.0, 2.0, 0.0]).unwrap();
    assert_eq!(autocorrelate(&rho).values()[0], 5.0);
}
