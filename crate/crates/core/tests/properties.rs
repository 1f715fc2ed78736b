//! Property tests for the structural invariants of the domain types and
//! estimators.

use proptest::prelude::*;

use difflab::combs::{tensor_product, SequenceWindow};
use difflab::correlation::autocorr_1d;
use difflab::entropy::block_entropy_adaptive;
use difflab::generators::{gen_rudin_shapiro, rudin_shapiro_value};
use difflab::io;
use difflab::spectra::{periodogram_1d, uniform_grid};

fn spin_weights(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop::bool::ANY.prop_map(|b| if b { 1.0 } else { -1.0 }), 1..max_len)
}

fn occupancy_weights(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop::bool::ANY.prop_map(|b| if b { 1.0 } else { 0.0 }), 1..max_len)
}

fn real_weights(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 1..max_len)
}

proptest! {
    #[test]
    fn window_round_trips_bit_exactly(origin in -1000i64..1000, weights in spin_weights(200)) {
        let w = SequenceWindow::new(origin, weights, "prop").unwrap();
        let from_csv = io::window_from_csv(&io::window_to_csv(&w)).unwrap();
        prop_assert_eq!(&from_csv, &w);
        let from_json: SequenceWindow = io::from_json(&io::to_json(&w)).unwrap();
        prop_assert_eq!(&from_json, &w);
    }

    #[test]
    fn occupancy_round_trips(origin in -50i64..50, weights in occupancy_weights(100)) {
        let w = SequenceWindow::new(origin, weights, "occ").unwrap();
        let back = io::window_from_csv(&io::window_to_csv(&w)).unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn window_reads_back_every_value(origin in -100i64..100, weights in real_weights(64)) {
        let w = SequenceWindow::new(origin, weights.clone(), "prop").unwrap();
        for (i, &expected) in weights.iter().enumerate() {
            prop_assert_eq!(w.value_at(origin + i as i64), Some(expected));
        }
        prop_assert_eq!(w.value_at(origin - 1), None);
        prop_assert_eq!(w.value_at(origin + weights.len() as i64), None);
    }

    #[test]
    fn tensor_product_is_pointwise(a in spin_weights(24), b in spin_weights(24)) {
        let wa = SequenceWindow::new(-3, a, "a").unwrap();
        let wb = SequenceWindow::new(7, b, "b").unwrap();
        let product = tensor_product(&wa, &wb).unwrap();
        for (m, va) in wa.sites() {
            for (n, vb) in wb.sites() {
                prop_assert_eq!(product.value_at(m, n), Some(va * vb));
            }
        }
    }

    #[test]
    fn autocorrelation_invariants(weights in real_weights(128)) {
        let n = weights.len();
        let w = SequenceWindow::new(0, weights, "prop").unwrap();
        let est = autocorr_1d(&w, n - 1).unwrap();
        est.validate(|l| -l).unwrap();
        let eta0 = est.eta(0).unwrap();
        prop_assert!(eta0 >= 0.0);
        for (&lag, &c) in est.lags().iter().zip(est.coefficients()) {
            prop_assert_eq!(est.eta(-lag), Some(c));
            prop_assert!(c.abs() <= eta0 + 1e-12);
        }
    }

    #[test]
    fn autocorrelation_matches_brute_force(weights in spin_weights(16)) {
        let n = weights.len();
        let w = SequenceWindow::new(-2, weights, "prop").unwrap();
        let est = autocorr_1d(&w, n - 1).unwrap();
        for m in 0..n as i64 {
            let mut acc = 0.0;
            for (site, a) in w.sites() {
                if let Some(b) = w.value_at(site + m) {
                    acc += a * b;
                }
            }
            prop_assert_eq!(est.eta(m), Some(acc / n as f64));
        }
    }

    #[test]
    fn rudin_shapiro_windows_agree_with_values(lo in -300i64..300, len in 1i64..200) {
        let w = gen_rudin_shapiro(lo, lo + len - 1).unwrap();
        for (n, v) in w.sites() {
            prop_assert_eq!(v, rudin_shapiro_value(n));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn block_entropies_monotone(weights in spin_weights(4096)) {
        prop_assume!(weights.len() >= 64);
        let w = SequenceWindow::new(0, weights, "prop").unwrap();
        let report = block_entropy_adaptive(&w, 8).unwrap();
        prop_assert!(report.block_entropies[0] <= 1.0 + 1e-12);
        for pair in report.block_entropies.windows(2) {
            prop_assert!(pair[1] >= pair[0] - 1e-12);
        }
        for (i, &rate) in report.rate_estimates.iter().enumerate() {
            let block_len = report.block_lengths[i] as f64;
            let cap = report.block_entropies[i] / block_len + 0.05;
            prop_assert!(rate >= -1e-12 && rate <= cap + 1e-12,
                "rate {rate} at L={} vs cap {cap}", block_len);
        }
    }

    #[test]
    fn periodogram_nonnegative_and_conserves_intensity(
        weights in real_weights(512),
        blocks in 1usize..8,
    ) {
        prop_assume!(weights.len() >= 64);
        let w = SequenceWindow::new(0, weights, "prop").unwrap();
        prop_assume!(blocks <= w.len());
        let block_len = w.len() / blocks;
        prop_assume!(block_len >= 8);
        let est = periodogram_1d(&w, &uniform_grid(block_len), blocks).unwrap();
        for &d in est.density() {
            prop_assert!(d >= 0.0);
        }
        // Mean density over the full grid conserves the total intensity
        // of the sites the estimator used, within 2/L.
        let mean: f64 = est.density().iter().sum::<f64>() / est.density().len() as f64;
        let used = block_len * blocks;
        let intensity: f64 =
            w.weights()[..used].iter().map(|v| v * v).sum::<f64>() / used as f64;
        prop_assert!((mean - intensity).abs() <= 2.0 / block_len as f64);
    }
}
