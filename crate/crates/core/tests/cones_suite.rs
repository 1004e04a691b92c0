use pairstab::chain::make_v;
use pairstab::cones::{
    check_copositive, check_pdf, check_pos, decompose, dual_vertices_z5, form_matrix,
    slice_measure_z5, stb_dual_bound, threshold_family_z5, threshold_scan, Certificate,
    CopositivityOptions,
};
use pairstab::group::{autocorrelate, wrap};
use pairstab::linalg::quadratic_form;
use pairstab::{golden_conjugate, Density, LatticePotential};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn v_z5() -> LatticePotential {
    LatticePotential::cyclic(vec![1.0, -1.0, 1.0, 1.0, -1.0]).unwrap()
}

/// Uniform point of the simplex via normalized exponentials.
fn simplex_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..dim).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

#[test]
fn v_line_window_12_against_simplex_sampling() {
    let v = make_v::<f64>();
    let verdict = check_copositive(&v, Some(12), &CopositivityOptions::default()).unwrap();
    assert!(verdict.copositive);
    verdict.validate(&v, Some(12)).unwrap();
    let (m, dim) = form_matrix(&v, Some(12)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut sampled = f64::INFINITY;
    for i in 0..1_000_000 {
        // mix interior points with sparse ones so that faces get visited
        let mut x = simplex_point(&mut rng, dim);
        if i % 2 == 1 {
            let keep = rng.gen_range(1..=4);
            let start = rng.gen_range(0..dim);
            for (j, xj) in x.iter_mut().enumerate() {
                if (j + dim - start) % dim >= keep {
                    *xj = 0.0;
                }
            }
            let s: f64 = x.iter().sum();
            x.iter_mut().for_each(|v| *v /= s);
        }
        sampled = sampled.min(quadratic_form(&m, &x));
    }
    assert!(sampled >= -1e-9, "sampled {sampled}");
    assert!(verdict.minimum <= sampled + 1e-9);
}

#[test]
fn v_on_z5_is_stable_but_not_decomposable() {
    let v = v_z5();
    assert!(check_copositive(&v, None, &CopositivityOptions::default()).unwrap().copositive);
    assert!(!check_pos(&v, 1e-9));
    assert!(!check_pdf(&v, 1e-9).unwrap());
    assert_eq!(wrap(&make_v::<f64>(), 5).unwrap(), v);
    let cert = decompose(&v).unwrap();
    cert.validate().unwrap();
    let Certificate::Separating(s) = cert else {
        panic!("expected a separator")
    };
    assert!((s.pairing - (2.0 - 5f64.sqrt())).abs() < 1e-12);
}

#[test]
fn small_moduli_copositive_kernels_decompose() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 2..=4 {
        let mut found = 0;
        let mut tries = 0;
        while found < 100 {
            tries += 1;
            assert!(tries < 100_000);
            let mut v = vec![0.0; n];
            v[0] = rng.gen_range(0.0..1.0);
            for k in 1..=n / 2 {
                let x = rng.gen_range(-1.0..1.0);
                v[k] = x;
                v[n - k] = x;
            }
            let p = LatticePotential::cyclic(v).unwrap();
            let verdict = check_copositive(&p, None, &CopositivityOptions::default()).unwrap();
            if !verdict.copositive {
                continue;
            }
            found += 1;
            let cert = decompose(&p).unwrap();
            assert!(cert.is_decomposition(), "n={n}, {p:?}");
            cert.validate().unwrap();
        }
    }
}

#[test]
fn lemma_bound_cyclic_and_line() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let bound_holds = |mu: &LatticePotential, rho: &Density| {
        let s = rho.total();
        let total = mu.sum();
        (total - s * s).abs() <= 1e-9 * (s * s).max(1.0) && stb_dual_bound(mu, Some(rho), 1e-12)
    };
    for _ in 0..100_000 {
        let w: Vec<f64> = (0..5)
            .map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..1.0) })
            .collect();
        let cyc = Density::cyclic(w.clone()).unwrap();
        assert!(bound_holds(&autocorrelate(&cyc), &cyc), "{w:?}");
        let line = Density::line(w.clone()).unwrap();
        assert!(bound_holds(&autocorrelate(&line), &line), "{w:?}");
    }
    // equality case
    let rho = Density::cyclic(vec![1.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
    let mu = autocorrelate(&rho);
    assert_eq!(mu.value(1), 1.0);
    assert_eq!(mu.sum() / 4.0, 1.0);
}

#[test]
fn dual_vertices_and_threshold() {
    let g = golden_conjugate::<f64>();
    let vs = dual_vertices_z5::<f64>().vertices;
    let want = [(0.0, 0.0), (0.0, g), (g, 0.0), (1.0, 1.0)];
    assert_eq!(vs.len(), 4);
    for ((a, b), (c, d)) in vs.iter().zip(want) {
        assert!((a - c).abs() < 1e-9 && (b - d).abs() < 1e-9);
    }
    // every vertex is a PDF measure whose pairing with V is >= 2 - sqrt 5
    for &(x, y) in &vs {
        let mu = slice_measure_z5(x, y).unwrap();
        assert!(check_pdf(&mu, 1e-9).unwrap());
    }
    let scan = threshold_scan(-1.0, -0.5, 1e-6).unwrap();
    assert!((scan.threshold + (1.0 + 5f64.sqrt()) / 4.0).abs() < 1e-6);
    assert!(!decompose(&threshold_family_z5(-1.0)).unwrap().is_decomposition());
    assert!(decompose(&threshold_family_z5(-0.7)).unwrap().is_decomposition());
}

#[test]
fn autocorrelations_lie_in_both_cones() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 2..=9 {
        for _ in 0..50 {
            let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
            let mu = autocorrelate(&Density::cyclic(w).unwrap());
            assert!(check_pos(&mu, 1e-12));
            assert!(check_pdf(&mu, 1e-9).unwrap());
        }
    }
}
