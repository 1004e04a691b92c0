use pairstab::chain::{cut_certificate, energy, make_v};
use pairstab::cones::{check_copositive, check_pdf, check_pos, decompose, CopositivityOptions};
use pairstab::continuum::energy_atomic;
use pairstab::group::{autocorrelate, dft, inverse_dft};
use pairstab::io::KernelJson;
use pairstab::{AtomicMeasure, BumpFunction, ContinuumPotential, Density, LatticePotential};
use proptest::prelude::*;

fn even_kernel(max_n: usize) -> impl Strategy<Value = LatticePotential> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-3.0..3.0f64, n / 2 + 1).prop_map(move |half| {
            let v = (0..n).map(|k| half[k.min(n - k)]).collect();
            LatticePotential::cyclic(v).unwrap()
        })
    })
}

fn weights(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), 0.0..10.0f64], 1..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn round_trip_and_parseval(p in even_kernel(64)) {
        let s = dft(&p).unwrap();
        let back = inverse_dft(&s).unwrap();
        for (a, b) in back.values().iter().zip(p.values()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        let lhs: f64 = p.values().iter().map(|x| x * x).sum();
        let rhs = s.coefficients().iter().map(|c| c * c).sum::<f64>() / p.values().len() as f64;
        prop_assert!((lhs - rhs).abs() < 1e-12 * lhs.max(1.0));
    }

    #[test]
    fn autocorrelation_is_positive_and_definite(w in weights(12)) {
        let rho = Density::cyclic(if w.len() < 2 { vec![w[0], 0.0] } else { w }).unwrap();
        let mu = autocorrelate(&rho);
        prop_assert!(check_pos(&mu, 0.0));
        prop_assert!(check_pdf(&mu, 1e-9).unwrap());
    }

    #[test]
    fn certificates_are_sound(p in even_kernel(8)) {
        let cert = decompose(&p).unwrap();
        prop_assert!(cert.validate().is_ok());
        if !cert.is_decomposition() {
            // a separator proves the kernel is not positive plus positive definite
            prop_assert!(!check_pos(&p, 1e-9) && !check_pdf(&p, 1e-9).unwrap());
        }
    }

    #[test]
    fn face_minimum_never_above_cross_check(p in even_kernel(10)) {
        let v = check_copositive(&p, None, &CopositivityOptions::default()).unwrap();
        prop_assert!(v.minimum <= v.cross_check_minimum + 1e-9 * v.minimum.abs().max(1.0));
        prop_assert!(v.validate(&p, None).is_ok());
    }

    #[test]
    fn cut_certificate_is_complete(w in weights(20), offset in -20i64..20) {
        let v = make_v::<f64>();
        let rho = Density::line_at(offset, w).unwrap();
        let cert = cut_certificate(&rho, &v).unwrap();
        let e = energy(&rho, &v);
        prop_assert!((cert.loss_sum() + cert.piece_sum() - e).abs() < 1e-9 * e.abs().max(1.0));
        prop_assert!(e >= -1e-9);
    }

    #[test]
    fn wrap_preserves_mass(w in weights(30), offset in -40i64..40, n in 2usize..9) {
        let rho = Density::line_at(offset, w).unwrap();
        let folded = rho.wrap(n).unwrap();
        prop_assert!((folded.total() - rho.total()).abs() < 1e-9);
    }

    #[test]
    fn kernel_json_round_trip(p in even_kernel(16)) {
        let j = KernelJson::from_potential(&p);
        let text = serde_json::to_string(&j).unwrap();
        let back = KernelJson::parse(&text).unwrap().to_potential().unwrap();
        for (a, b) in back.values().iter().zip(p.values()) {
            prop_assert!((a - b).abs() <= 1e-14 * a.abs().max(1e-300));
        }
    }

    #[test]
    fn atomic_energy_paths_agree(atoms in prop::collection::vec((0.0..6.0f64, 0.0..2.0f64), 1..10)) {
        let w = ContinuumPotential::chain(BumpFunction::cosine());
        let (pts, ws): (Vec<f64>, Vec<f64>) = atoms.into_iter().unzip();
        let e = energy_atomic(&AtomicMeasure::new(pts, ws).unwrap(), &w).unwrap();
        prop_assert!(e.double_sum >= -1e-9);
    }
}
