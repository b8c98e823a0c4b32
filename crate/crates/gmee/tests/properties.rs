//! Property tests for the estimator and quantizer invariants.

use gmee::config::{parse_config, render_config};
use gmee::entropy::{generalized_ip, quadratic_ip};
use gmee::kernel::GgdKernel;
use gmee::quantizer::{quantize, quantized_ip};
use proptest::prelude::*;

fn errors_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, 1..200)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Every sample lands in exactly one codebook bucket.
    #[test]
    fn quantizer_conserves_sample_count(
        errors in errors_strategy(),
        gamma in 0.0f64..2.0,
    ) {
        let book = quantize(&errors, gamma).unwrap();
        prop_assert_eq!(book.total_count(), errors.len());
        prop_assert!(book.len() <= errors.len());
        prop_assert_eq!(book.counts().len(), book.centers().len());
    }

    /// No two centers may sit within the merge threshold of each other.
    #[test]
    fn quantizer_centers_exceed_gamma(
        errors in errors_strategy(),
        gamma in 0.0f64..2.0,
    ) {
        let book = quantize(&errors, gamma).unwrap();
        for (i, &a) in book.centers().iter().enumerate() {
            for &b in &book.centers()[i + 1..] {
                prop_assert!((a - b).abs() > gamma);
            }
        }
    }

    /// IP estimators are symmetric functions of the error list.
    #[test]
    fn ip_estimators_are_permutation_invariant(
        errors in prop::collection::vec(-5.0f64..5.0, 1..40),
        alpha in 1.0f64..6.0,
        beta in 0.2f64..4.0,
        rotation in 0usize..40,
    ) {
        let kernel = GgdKernel::new(alpha, beta).unwrap();
        let mut permuted = errors.clone();
        permuted.rotate_left(rotation % errors.len());

        let a = generalized_ip(&errors, &kernel).unwrap();
        let b = generalized_ip(&permuted, &kernel).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300));

        let qa = quadratic_ip(&errors, beta).unwrap();
        let qb = quadratic_ip(&permuted, beta).unwrap();
        prop_assert!((qa - qb).abs() <= 1e-12 * qa.max(1e-300));

        // with the codebook held fixed, the quantized IP is also symmetric
        let book = quantize(&errors, 0.3).unwrap();
        let za = quantized_ip(&errors, &book, &kernel).unwrap();
        let zb = quantized_ip(&permuted, &book, &kernel).unwrap();
        prop_assert!((za - zb).abs() <= 1e-12 * za.max(1e-300));
    }

    /// `0 < V ≤ G(0)`, with the peak attained only by coincident samples.
    #[test]
    fn ip_bounds(
        errors in prop::collection::vec(-5.0f64..5.0, 1..60),
        alpha in 1.0f64..6.0,
        beta in 0.2f64..4.0,
    ) {
        let kernel = GgdKernel::new(alpha, beta).unwrap();
        let ip = generalized_ip(&errors, &kernel).unwrap();
        let peak = kernel.eval(0.0);
        prop_assert!(ip > 0.0);
        prop_assert!(ip <= peak * (1.0 + 1e-12));
        let all_equal = errors.windows(2).all(|w| w[0] == w[1]);
        if !all_equal {
            prop_assert!(ip < peak);
        }
    }

    /// Zero-threshold quantization is exact.
    #[test]
    fn zero_gamma_quantized_ip_is_exact(
        errors in prop::collection::vec(-5.0f64..5.0, 1..40),
        alpha in 1.0f64..6.0,
    ) {
        let kernel = GgdKernel::new(alpha, 1.0).unwrap();
        let book = quantize(&errors, 0.0).unwrap();
        let a = quantized_ip(&errors, &book, &kernel).unwrap();
        let b = generalized_ip(&errors, &kernel).unwrap();
        prop_assert_eq!(a, b);
    }

    /// Valid configs survive a render/parse round trip unchanged.
    #[test]
    fn config_round_trip(
        seed in any::<u64>(),
        filter_len in 1usize..64,
        iterations in 1usize..100_000,
        runs in 1usize..200,
        eta in 1e-6f64..1.0,
        variance in 1e-3f64..10.0,
        algo in 0usize..4,
    ) {
        let algorithm = match algo {
            0 => format!("kind = \"lms\"\neta = {eta}"),
            1 => format!("kind = \"lmf\"\neta = {eta}"),
            2 => format!("kind = \"gmee\"\neta = {eta}\nalpha = 2.0\nbeta = 1.0\nwindow = 5"),
            _ => "kind = \"rls\"\nforgetting = 0.99\ndelta = 100.0".to_string(),
        };
        let text = format!(
            "kind = \"sysid\"\nbase_seed = {seed}\n\n[dimensions]\nfilter_len = {filter_len}\n\n[run]\niterations = {iterations}\nruns = {runs}\n\n[noise]\nkind = \"gaussian\"\nvariance = {variance}\n\n[[algorithms]]\n{algorithm}\n"
        );
        let config = parse_config(&text).unwrap();
        let back = parse_config(&render_config(&config)).unwrap();
        prop_assert_eq!(config, back);
    }
}
