mod common;

use proptest::prelude::*;
use supergeom::{Error, LambdaElement};

const N: u32 = 8;

fn pair(seed: u64, odd_a: bool, odd_b: bool) -> (LambdaElement, LambdaElement) {
    let mut r = common::rng(seed);
    (
        common::lambda_homogeneous(&mut r, N, 6, odd_a),
        common::lambda_homogeneous(&mut r, N, 6, odd_b),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn graded_commutativity(seed in any::<u64>(), odd_a in any::<bool>(), odd_b in any::<bool>()) {
        let (a, b) = pair(seed, odd_a, odd_b);
        let ab = &a * &b;
        let ba = &b * &a;
        if odd_a && odd_b {
            prop_assert_eq!(ab, -&ba);
        } else {
            prop_assert_eq!(ab, ba);
        }
    }

    #[test]
    fn associativity_and_distributivity(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let a = common::lambda(&mut r, N, 6);
        let b = common::lambda(&mut r, N, 6);
        let c = common::lambda(&mut r, N, 6);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn conjugation_is_an_involutive_anti_homomorphism(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let a = common::lambda(&mut r, N, 6);
        let b = common::lambda(&mut r, N, 6);
        prop_assert_eq!((&a * &b).conjugate(), &b.conjugate() * &a.conjugate());
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        prop_assert_eq!(a.conjugate().real_part(), a.real_part());
    }

    #[test]
    fn inverse_is_two_sided(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let a = common::lambda_invertible(&mut r, N);
        let inv = a.invert().unwrap();
        let one = LambdaElement::one(N);
        prop_assert_eq!(&a * &inv, one.clone());
        prop_assert_eq!(&inv * &a, one);
    }

    #[test]
    fn soul_only_elements_are_not_invertible(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let a = common::lambda(&mut r, N, 6);
        let soul = &a - &LambdaElement::scalar(N, a.real_part());
        prop_assert!(!soul.is_invertible());
        prop_assert!(matches!(soul.invert(), Err(Error::NonInvertible)));
    }

    #[test]
    fn involution_is_an_automorphism(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let a = common::lambda(&mut r, N, 6);
        let b = common::lambda(&mut r, N, 6);
        prop_assert_eq!((&a * &b).involution(), &a.involution() * &b.involution());
        prop_assert_eq!(&a.even_part() + &a.odd_part(), a);
    }
}
