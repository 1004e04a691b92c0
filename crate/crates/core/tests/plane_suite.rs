use pairstab::plane2d::{eval_w1, CombParams, PlaneModel, QuadratureSpec, SeriesMode, COMB_SPACING};
use pairstab::{BumpFunction, ContinuumPotential};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn quarter_w() -> ContinuumPotential {
    ContinuumPotential::chain(BumpFunction::cosine_with_half_width(0.25))
}

fn w1_double_sum(w: &ContinuumPotential, x: f64, eps: f64, reach: i64) -> f64 {
    let mut total = 0.0;
    for j in -reach..=reach {
        for k in -reach..=reach {
            let c = (-eps * (j.abs() + k.abs()) as f64).exp();
            total += c * w.eval(x - COMB_SPACING * (j + k) as f64);
        }
    }
    total
}

#[test]
fn w1_matches_double_sum() {
    let w = quarter_w();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for eps in [0.5, 1.0, 2.0] {
        let comb = CombParams::new(eps).unwrap();
        for _ in 0..40 {
            let x = rng.gen_range(-30.0..30.0);
            let oracle = w1_double_sum(&w, x, eps, 80);
            assert!((eval_w1(&w, x, &comb) - oracle).abs() < 1e-9, "eps={eps} x={x}");
            assert_eq!(eval_w1(&w, x, &comb), eval_w1(&w, -x, &comb));
        }
    }
}

#[test]
fn w1_first_copy() {
    let w = quarter_w();
    let comb = CombParams::new(1.0).unwrap();
    let w0 = w.eval(0.0);
    let got = eval_w1(&w, 5.0, &comb);
    assert!((got - w1_double_sum(&w, 5.0, 1.0, 60)).abs() < 1e-12);
    let lead = 2.0 * (-1.0f64).exp() * w0;
    assert!((got - lead).abs() < 10.0 * (-3.0f64).exp() * w0);
    // heavy damping leaves only the central copy
    let stiff = CombParams::new(40.0).unwrap();
    for x in [0.0, 0.6, 1.9, -2.2] {
        assert!((eval_w1(&w, x, &stiff) - w.eval(x)).abs() < 1e-15);
    }
}

#[test]
fn w2_at_origin_converges() {
    let comb = CombParams::new(0.5).unwrap();
    let values: Vec<f64> = [8, 16, 32]
        .iter()
        .map(|&order| {
            let spec = QuadratureSpec {
                radial_order: order,
                angular_order: order,
                rel_tol: 1.0,
                ..QuadratureSpec::default()
            };
            PlaneModel::new(spec).unwrap().eval_w2(0.0, &comb).unwrap().value
        })
        .collect();
    assert!(values.iter().all(|v| v.is_finite() && *v > 0.0));
    let (d1, d2) = ((values[1] - values[0]).abs(), (values[2] - values[1]).abs());
    assert!(d2 <= d1 && d2 < 1e-6 * values[2], "{values:?}");
}

#[test]
fn w2_decays_and_matches_asymptotics() {
    let model = PlaneModel::new(QuadratureSpec::default()).unwrap();
    let comb = CombParams::new(0.2).unwrap();
    for nu in 2..=4 {
        for n in -2..=2i64 {
            let r = (5 * nu + n) as f64;
            let q = model.eval_w2(r, &comb).unwrap();
            let a = model.asymptotic_w2(nu, n, &comb);
            assert!(q.error <= 1e-3 * q.value.abs().max(1e-12));
            assert!((q.value - a.value).abs() <= 0.01 * a.value.abs(), "nu={nu} n={n}");
        }
    }
    let near = model.eval_w2(10.0, &comb).unwrap().value.abs();
    let far = model.eval_w2(60.0, &comb).unwrap().value.abs();
    assert!(far < near * (-0.2f64 * 9.0).exp());
}

#[test]
fn quadratic_form_of_w2_is_nonnegative() {
    let model = PlaneModel::new(QuadratureSpec::default()).unwrap();
    let comb = CombParams::new(0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..8 {
        let pts: Vec<(f64, f64, f64)> = (0..5)
            .map(|_| (rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5), rng.gen_range(0.0..1.0)))
            .collect();
        let (mut e, mut budget) = (0.0, 0.0);
        for a in &pts {
            for b in &pts {
                let r = ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
                let w2 = model.eval_w2(r, &comb).unwrap();
                e += a.2 * b.2 * w2.value;
                budget += a.2 * b.2 * w2.error;
            }
        }
        assert!(e >= -budget - 1e-12, "{e} {budget}");
    }
}

#[test]
fn normalized_scan_decreases() {
    let model = PlaneModel::new(QuadratureSpec::default()).unwrap();
    let scan = model.pairing_scan(&[0.2, 0.1, 0.05], SeriesMode::AsymptoticTail).unwrap();
    assert!(scan.points.windows(2).all(|p| p[1].s < p[0].s));
    let slope = scan.slope.unwrap();
    assert!(slope < 0.0);
    let predicted = model.predicted_slope();
    assert!((slope - predicted).abs() <= 0.25 * predicted.abs(), "{slope} vs {predicted}");
    let single = model.pairing_scan(&[0.3], SeriesMode::AsymptoticTail).unwrap();
    assert_eq!((single.slope, single.residual), (None, None));
    assert!(model.pairing_scan(&[], SeriesMode::AsymptoticTail).is_err());
    assert!(model.pairing_scan(&[0.1, 0.2], SeriesMode::AsymptoticTail).is_err());
}
