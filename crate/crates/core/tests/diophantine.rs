use num_bigint::BigUint;
use orbclose::diophantine::{
    construct_alpha_with_gamma, convergent_bounds_hold, decimal_digits, estimate_gamma, ln_big, ratio_to_f64,
    ContinuedFraction,
};
use proptest::prelude::*;

/// Float evaluation of `[0; a_1, ..., a_K]` from the bottom up.
fn float_value(a: &[u64]) -> f64 {
    a.iter().rev().fold(0.0, |acc, &ak| 1.0 / (ak as f64 + acc))
}

proptest! {
    #[test]
    fn convergents_follow_the_recurrence(a in prop::collection::vec(1u64..50, 3..25)) {
        let cf = ContinuedFraction::from_u64(&a).unwrap();
        // p_k q_{k-1} - p_{k-1} q_k = (-1)^{k-1}
        for k in 2..=cf.len() {
            let (p, q) = cf.convergent(k);
            let (pp, qp) = cf.convergent(k - 1);
            let (l, r) = (p * qp, pp * q);
            if k % 2 == 0 {
                prop_assert_eq!(r, l + 1u32);
            } else {
                prop_assert_eq!(l, r + 1u32);
            }
        }
        prop_assert!(convergent_bounds_hold(&cf));
        prop_assert!((cf.value_f64() - float_value(&a)).abs() < 1e-12);
    }

    #[test]
    fn ratio_and_log_match_floats(num in 1u64..u64::MAX / 2, extra in 1u64..1000) {
        let (n, d) = (BigUint::from(num), BigUint::from(num) + extra);
        let expect = num as f64 / (num as f64 + extra as f64);
        prop_assert!((ratio_to_f64(&n, &d) - expect).abs() <= 2.0 * f64::EPSILON);
        let big = &n << 200u32;
        prop_assert!((ln_big(&big) - ((num as f64).ln() + 200.0 * std::f64::consts::LN_2)).abs() < 1e-9);
    }

    #[test]
    fn decimal_digits_counts(x in 1u64..u64::MAX, shift in 0u32..40) {
        let n = BigUint::from(x) * BigUint::from(10u32).pow(shift);
        prop_assert_eq!(decimal_digits(&n), n.to_string().len() as u64);
    }

    #[test]
    fn bounded_quotients_give_exponent_near_one(a in prop::collection::vec(1u64..4, 60..80)) {
        let est = estimate_gamma(&ContinuedFraction::from_u64(&a).unwrap()).unwrap();
        prop_assert!(est.summary >= 1.0 && est.summary < 1.2, "{}", est.summary);
    }
}

#[test]
fn powers_of_ten_have_exact_digit_counts() {
    for e in [1u32, 15, 16, 17, 100, 1000] {
        let p = BigUint::from(10u32).pow(e);
        assert_eq!(decimal_digits(&p), u64::from(e) + 1);
        assert_eq!(decimal_digits(&(p - 1u32)), u64::from(e));
    }
}

#[test]
fn round_trip_over_targets() {
    for target in [1.0, 1.5, 2.0, 3.0, 4.0] {
        let built = construct_alpha_with_gamma(target, 12).unwrap();
        assert!(built.warning.is_none());
        assert!(convergent_bounds_hold(&built.cf));
        let est = estimate_gamma(&built.cf).unwrap();
        assert!((est.summary - target).abs() <= 0.3, "{target}: {}", est.summary);
        assert!(built.alpha > 0.0 && built.alpha < 1.0);
    }
}

#[test]
fn rationals_are_rejected() {
    let cf = ContinuedFraction::from_ratio(&BigUint::from(355u32), &BigUint::from(1130u32)).unwrap();
    assert!(cf.terminates());
    assert!(estimate_gamma(&cf).is_err());
}
