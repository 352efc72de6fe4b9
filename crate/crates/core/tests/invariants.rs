use approx::assert_relative_eq;
use proptest::prelude::*;

use nsp_decay_core::ineq::{product, trial_seed, ConvolutionCase, ProductLaw};
use nsp_decay_core::linear::mode_exponential;
use nsp_decay_core::lp::{besov_norm, phi, BesovSpec, SumExponent};
use nsp_decay_core::spectral::{random_field, Grid, Support};

fn sum_exponent() -> impl Strategy<Value = SumExponent> {
    prop_oneof![Just(SumExponent::One), Just(SumExponent::Two), Just(SumExponent::Infinity)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dyadic_partition_sums_to_one(r in 1e-3f64..1e4) {
        let lo = r.log2().floor() as i32 - 3;
        let total: f64 = (lo..lo + 8).map(|j| phi(r * (-j as f64).exp2())).sum();
        prop_assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn besov_norm_is_absolutely_homogeneous(
        seed in any::<u64>(),
        c in -50.0f64..50.0,
        s in -1.0f64..2.0,
        p in prop_oneof![Just(2.0f64), Just(3.0), Just(f64::INFINITY)],
        r in sum_exponent(),
    ) {
        let g = Grid::<f64>::new(2, 32, 9.0).unwrap();
        let f = random_field(&g, Support::Ball { radius: 8.0 }, seed).unwrap();
        let spec = BesovSpec::new(s, p, r);
        let base = besov_norm(&f, &spec).unwrap();
        let scaled = besov_norm(&f.scaled(c), &spec).unwrap();
        assert_relative_eq!(scaled, c.abs() * base, max_relative = 1e-12, epsilon = 1e-300);
    }

    #[test]
    fn mode_exponential_is_a_semigroup(r in 0.0f64..6.0, t in 0.0f64..4.0, s in 0.0f64..4.0, poisson in any::<bool>()) {
        let ets = mode_exponential(r, t + s, poisson).unwrap();
        let prod = mode_exponential(r, t, poisson).unwrap() * mode_exponential(r, s, poisson).unwrap();
        let scale = ets.max_abs().max(1e-3);
        prop_assert!(ets.max_abs_diff(&prod) <= 1e-10 * scale);
    }

    #[test]
    fn product_ratio_is_scale_invariant(seed in any::<u64>(), c1 in 0.1f64..10.0, c2 in 0.1f64..10.0) {
        let g = Grid::<f64>::new(2, 64, std::f64::consts::TAU).unwrap();
        let ball = Support::Ball { radius: 15.0 };
        let f = random_field(&g, ball, seed).unwrap();
        let h = random_field(&g, ball, seed ^ 0x5555).unwrap();
        let law = ProductLaw::Mixed { sigma1: 0.5, sigma2: 0.5, p1: 2.0, p2: 2.0 };
        let (l0, r0) = law.evaluate(&f, &h).unwrap();
        let (l1, r1) = law.evaluate(&f.scaled(c1), &h.scaled(c2)).unwrap();
        assert_relative_eq!(l1 / r1, l0 / r0, max_relative = 1e-10);
        // The product itself is symmetric.
        let fh = product(&f, &h).unwrap();
        let hf = product(&h, &f).unwrap();
        prop_assert!(fh.max_abs_diff(&hf) < 1e-14);
    }

    #[test]
    fn memoryless_convolution_is_monotone_in_t(t in 0.1f64..200.0, dt in 0.01f64..50.0, s2 in 1.1f64..4.0) {
        let c = ConvolutionCase { sigma1: 0.0, sigma2: s2, theta: 0.0 };
        prop_assert!(c.integral(t + dt) >= c.integral(t));
        prop_assert!(c.integral(t + dt) <= c.integrability_constant() * (1.0 + 1e-10));
    }

    #[test]
    fn trial_seeds_are_distinct(master in any::<u64>()) {
        let seeds: std::collections::BTreeSet<u64> = (0..64).map(|k| trial_seed(master, k)).collect();
        prop_assert_eq!(seeds.len(), 64);
    }
}
