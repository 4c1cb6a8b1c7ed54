use maclab::constterm::{constant_term_of_product, DEFAULT_PRODUCT_CAP};
use maclab::qseries::{
    coinvariant_series, free_super_series, g0_exponents, predict_truncated,
    q_binomial, shifted_q_binomial, BiPoly, Generator, LaurentQ, QRational,
};
use maclab::rootdata::{CartanType, RootSystem};
use num_bigint::BigInt;
use proptest::prelude::*;

proptest! {
    #[test]
    fn shifted_binomial_reduces_at_k1(a in 0i64..9, b in 0i64..9) {
        prop_assume!(b <= a);
        let s = shifted_q_binomial(a, b, 1, 0).unwrap().to_polynomial().unwrap();
        prop_assert_eq!(s, q_binomial(a, b).unwrap());
    }

    #[test]
    fn binomial_symmetry_and_value(a in 0i64..10, b in 0i64..10) {
        prop_assume!(b <= a);
        let p = q_binomial(a, b).unwrap();
        prop_assert_eq!(&p, &q_binomial(a, a - b).unwrap());
        prop_assert!(p.has_nonnegative_coefficients());
        let choose = (0..b).fold(BigInt::from(1), |acc, i| acc * (a - i) / (i + 1));
        prop_assert_eq!(p.eval_at_one(), choose);
    }

    #[test]
    fn rational_products_cancel(xs in proptest::collection::vec(1u64..13, 0..6)) {
        let mut r = QRational::one();
        for &x in &xs {
            r.mul_one_minus(x, 1);
        }
        let direct = xs.iter().fold(LaurentQ::one(), |acc, &x| &acc * &LaurentQ::one_minus_q_pow(x as i64));
        prop_assert_eq!(r.to_polynomial().unwrap(), direct.clone());
        prop_assert_eq!(r.inverse().apply_to(&direct).unwrap(), LaurentQ::one());
    }

    #[test]
    fn division_round_trip(a in proptest::collection::vec(-3i64..4, 1..6), b in proptest::collection::vec(-3i64..4, 1..5)) {
        let pa = LaurentQ::from_coeffs(&a);
        let pb = LaurentQ::from_coeffs(&b);
        prop_assume!(!pb.is_zero());
        let prod = &pa * &pb;
        prop_assert_eq!(prod.div_exact(&pb).unwrap(), pa);
    }

    #[test]
    fn pruned_expansion_matches_reference(
        fs in proptest::collection::vec((proptest::collection::vec(-2i64..3, 2), 0i64..4), 0..9)
    ) {
        let pruned = constant_term_of_product(2, &fs, true, DEFAULT_PRODUCT_CAP).unwrap();
        let full = constant_term_of_product(2, &fs, false, DEFAULT_PRODUCT_CAP).unwrap();
        prop_assert_eq!(pruned, full);
    }

    #[test]
    fn polynomial_text_round_trip(cs in proptest::collection::vec(-5i64..6, 0..8)) {
        let p = LaurentQ::from_coeffs(&cs);
        prop_assert_eq!(p.to_string().parse::<LaurentQ>().unwrap(), p);
    }
}

#[test]
fn coinvariants_count_cosets() {
    for name in ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4"] {
        let rs = RootSystem::new(CartanType::of(name));
        let l = rs.rank();
        for mask in 0u32..(1 << l) {
            let s: Vec<usize> = (0..l).filter(|i| mask & (1 << i) != 0).collect();
            let g0 = g0_exponents(&rs, &s);
            let p = coinvariant_series(&rs.exponents(), &g0).unwrap();
            assert!(p.has_nonnegative_coefficients());
            let ratio = rs.weyl_order() / rs.sub_system(&s).weyl_order();
            assert_eq!(p.eval_at_one(), BigInt::from(ratio), "{name} {s:?}");
        }
    }
}

#[test]
fn untwisted_prediction_degrees() {
    // N generators per exponent: one at z-degree 0, the rest at N m + j
    for n in 1..=4usize {
        let p = predict_truncated(&[vec![1, 2]], &[1, 2], n).unwrap();
        let mut gens = vec![Generator::new(3, 0, None), Generator::new(5, 0, None)];
        for m in [1i64, 2] {
            for j in 1..n as i64 {
                gens.push(Generator::new(2 * m + 1, n as i64 * m + j, None));
            }
        }
        assert_eq!(p, free_super_series(&gens, None).unwrap());
    }
}

#[test]
fn truncated_comparison_flags_clamp() {
    let a: BiPoly = "1 + q*t^2 + q^2*t^4 + q^3*t^6".parse().unwrap();
    let b = free_super_series(&[Generator::new(2, 1, None)], Some(2)).unwrap();
    let c = a.compare(&b);
    assert!(c.equal && c.clamped);
    assert!(!a.compare(&b.truncate(1)).equal || a.truncate(1) == b.truncate(1));
}
