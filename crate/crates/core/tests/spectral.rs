use forge_core::pipeline::{verify_gadget_lambda2, Lambda2Method};
use forge_core::random::{percolate, sample_configuration_model};
use forge_core::spectral::{build_test_vector, default_t, dense_spectrum, lanczos_topk};
use forge_core::RngSpec;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lanczos_matches_dense(seed in any::<u64>(), half in 15usize..60, k in 1usize..5) {
        let g = sample_configuration_model(2 * half, 3, RngSpec::from_seed(seed)).unwrap();
        let mut dense = dense_spectrum(&g);
        dense.sort_by(|a, b| b.total_cmp(a));
        let r = lanczos_topk(&g, k, 1e-10, seed).unwrap();
        for (x, y) in r.eigenvalues.iter().zip(&dense) {
            prop_assert!((x - y).abs() < 1e-7, "{} vs {}", x, y);
        }
    }

    #[test]
    fn quotient_agrees_with_materialized(seed in any::<u64>(), depth in 1usize..5) {
        let h = sample_configuration_model(40, 3, RngSpec::from_seed(seed)).unwrap();
        let g0 = percolate(&h, 0.85, RngSpec::new(seed, 1)).unwrap();
        let q = verify_gadget_lambda2(&g0, 3, depth, 1e-10, Lambda2Method::Quotient).unwrap();
        let m = verify_gadget_lambda2(&g0, 3, depth, 1e-10, Lambda2Method::Materialized).unwrap();
        prop_assert!((q - m).abs() < 1e-6, "{} vs {}", q, m);
    }
}

#[test]
fn test_vector_residual_shrinks_up_to_default_radius() {
    let h = sample_configuration_model(20_000, 3, RngSpec::from_seed(3)).unwrap();
    let g0 = percolate(&h, 0.885, RngSpec::new(3, 1)).unwrap();
    let t = default_t(20_000, 3);
    let ratios: Vec<f64> =
        (1..=t).map(|s| build_test_vector(&g0, 3, 0.885, s).unwrap().residual(&g0, None).ratio).collect();
    assert!(ratios.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
}
