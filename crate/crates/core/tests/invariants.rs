use fermidim::counting::{binomial_identity, enumerate_count, kasteleyn_count, rotated_count};
use fermidim::cylinder::{binomial, verify_commutation, verify_inversion_cylinder};
use fermidim::field::Qi2;
use fermidim::linalg::C64;
use fermidim::qseries::gaussian_coeffs;
use fermidim::strip::verify_strip_commutation;
use num_bigint::{BigInt, Sign};
use proptest::prelude::*;

fn qi2() -> impl Strategy<Value = Qi2> {
    (-9i64..=9, -9i64..=9, -9i64..=9, -9i64..=9).prop_map(|(a, b, c, d)| Qi2::from_ints(a, b, c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gaussian_binomial_is_palindromic_and_sums_to_binomial(n in 0usize..14, k in 0usize..14) {
        prop_assume!(k <= n);
        let c = gaussian_coeffs(n, k);
        prop_assert_eq!(c.len(), k * (n - k) + 1);
        let rev: Vec<_> = c.iter().rev().cloned().collect();
        prop_assert_eq!(&rev, &c);
        prop_assert!(c.iter().all(|x| x.sign() != Sign::Minus));
        let total: BigInt = c.iter().sum();
        prop_assert_eq!(total, BigInt::from(binomial(n, k)));
    }

    #[test]
    fn rotated_count_is_symmetric_in_its_sides(m in 1usize..10, n in 1usize..10) {
        let a = rotated_count(m, n, None).unwrap().value;
        let b = rotated_count(n, m, None).unwrap().value;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn standard_count_needs_even_sides(m in 1usize..9, n in 1usize..9) {
        match kasteleyn_count(m, n) {
            Ok(z) => {
                prop_assert!(m % 2 == 0 && n % 2 == 0);
                prop_assert!(z.value.sign() == Sign::Plus);
            }
            Err(_) => prop_assert!(m % 2 == 1 || n % 2 == 1),
        }
    }

    #[test]
    fn field_axioms_hold(a in qi2(), b in qi2(), c in qi2()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if let Some(inv) = a.inv() {
            prop_assert_eq!(&a * &inv, Qi2::one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn exact_elements_survive_float_round_trip(a in qi2()) {
        let z = a.to_c64();
        prop_assert_eq!(Qi2::identify(z, 9, 1e-12), Some(a));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn transfer_matrices_commute_at_random_spectral_parameters(
        n in 2usize..7, u in 0.05f64..1.52, v in 0.05f64..1.52,
    ) {
        prop_assert!(verify_commutation(n, u, v).unwrap().pass);
        prop_assert!(verify_strip_commutation(n, u, v).unwrap().pass);
    }

    #[test]
    fn cylinder_inversion_is_gauge_independent(n in 2usize..7, u in 0.05f64..1.52, re in 0.5f64..2.0, im in -1.0f64..1.0) {
        prop_assert!(verify_inversion_cylinder(n, u, C64::new(re, im)).unwrap().pass);
    }
}

#[test]
fn rotated_counts_agree_with_enumeration_on_small_rectangles() {
    for (m, n) in [(1, 1), (1, 7), (2, 3), (2, 5), (3, 3)] {
        let f = rotated_count(m, n, None).unwrap().value;
        let e = enumerate_count(m, n).unwrap().value;
        assert_eq!(f, e, "{m}x{n}");
    }
}

#[test]
fn sector_dimensions_sum_to_full_space() {
    for n in 1..=12 {
        let total: usize = (0..=n).map(|d| binomial(n, d)).sum();
        assert_eq!(total, 1 << n);
        let (lhs, rhs) = binomial_identity(n);
        assert_eq!(lhs, rhs, "N={n}");
    }
}

#[test]
fn oversized_requests_are_rejected() {
    assert!(enumerate_count(4, 4).is_err());
    assert!(rotated_count(0, 3, None).is_err());
}
