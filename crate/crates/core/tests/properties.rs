use approx::assert_abs_diff_eq;
use entbound::bounds::{beta_deform, u, xi_ef};
use entbound::correlations::{c_on_pure, MonotoneKind};
use entbound::measures::{concurrence, max_concurrence, max_ef_state, s22_ef};
use entbound::qcore::random::stream_rng;
use entbound::qcore::{
    haar_pure, majorizes, random_unitary, spectrum, BipartiteSplit, DensityMatrix, Spectrum,
    Subsystem,
};
use entbound::LN2;
use proptest::prelude::*;

fn spectrum_strategy(max_len: usize) -> impl Strategy<Value = Spectrum> {
    prop::collection::vec(0.0f64..1.0, 1..=max_len)
        .prop_filter("non-zero weights", |w| w.iter().sum::<f64>() > 1e-6)
        .prop_map(|w| Spectrum::from_weights(&w).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn beta_deformation_majorizes(p in spectrum_strategy(6), beta in 1.0f64..30.0) {
        let q = beta_deform(&p, beta).unwrap();
        prop_assert!(majorizes(&q, &p));
    }

    #[test]
    fn bound_is_non_increasing(a in 0.0f64..1.0, b in 0.0f64..1.0) {
        for kind in [MonotoneKind::Bures, MonotoneKind::Hellinger] {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let c = kind.c_max(4);
            prop_assert!(xi_ef(kind, hi * c).unwrap() <= xi_ef(kind, lo * c).unwrap());
        }
    }

    #[test]
    fn u_stays_within_the_entanglement_range(y in 0.0f64..0.75) {
        let value = u(y).unwrap();
        prop_assert!((0.0..=LN2 + 1e-15).contains(&value));
    }

    #[test]
    fn orbit_concurrence_never_beats_the_spectral_cap(p in spectrum_strategy(4), seed in 0u64..1000) {
        let mut rng = stream_rng(seed, 0);
        let q = p.padded(4).unwrap();
        let rho = DensityMatrix::from_eigensystem(&q, &random_unitary(4, &mut rng)).unwrap();
        prop_assert!(concurrence(&rho).unwrap() <= max_concurrence(&p).unwrap() + 1e-9);
    }

    #[test]
    fn max_ef_state_has_the_requested_spectrum(p in spectrum_strategy(4)) {
        let rho = max_ef_state(&p).unwrap();
        let got = spectrum(&rho);
        for i in 0..4 {
            assert_abs_diff_eq!(got.get(i), p.get(i), epsilon = 1e-9);
        }
        prop_assert!(s22_ef(&p).unwrap() <= LN2 + 1e-15);
    }

    #[test]
    fn bound_holds_on_random_pure_states(seed in 0u64..10_000) {
        let mut rng = stream_rng(seed, 1);
        let split = BipartiteSplit::new(4, 4).unwrap();
        let psi = haar_pure(16, &mut rng).unwrap();
        let rho_a = psi.reduced(split, Subsystem::First).unwrap();
        let e = entbound::measures::entanglement_of_formation(&rho_a).unwrap();
        for kind in [MonotoneKind::Bures, MonotoneKind::Hellinger] {
            let x = c_on_pure(&psi, split, kind).unwrap().min(kind.c_max(4));
            prop_assert!(e <= xi_ef(kind, x).unwrap() + 1e-9);
        }
    }
}
