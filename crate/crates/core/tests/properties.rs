use num_bigint::BigInt;
use proptest::prelude::*;

use qpart::identities::legendre;
use qpart::oracle::{self, PartitionSpec};
use qpart::qfactory::{Convention, Factory};
use qpart::theorems::{self, Family, InstanceParams, DEFAULT_MAX_TRUNC};
use qpart::{Ring, Series};

const TRUNC: usize = 24;

fn exact_series() -> impl Strategy<Value = Series> {
    prop::collection::vec(-50i64..50, TRUNC + 1).prop_map(|c| Series::new(c, TRUNC, None).unwrap())
}

fn unit_series() -> impl Strategy<Value = Series> {
    (prop::bool::ANY, prop::collection::vec(-50i64..50, TRUNC)).prop_map(|(neg, rest)| {
        let mut c = vec![if neg { -1 } else { 1 }];
        c.extend(rest);
        Series::new(c, TRUNC, None).unwrap()
    })
}

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31])
}

proptest! {
    #[test]
    fn ring_laws(a in exact_series(), b in exact_series(), c in exact_series()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a);
    }

    #[test]
    fn inverse_is_inverse(a in unit_series()) {
        let one = Series::one(Ring::Exact, TRUNC);
        prop_assert_eq!(&a * &a.invert().unwrap(), one);
    }

    #[test]
    fn dilate_then_extract(a in exact_series(), k in 1usize..5) {
        let back = a.dilate(k).unwrap().extract_progression(k, 0).unwrap();
        prop_assert_eq!(back.trunc(), TRUNC / k);
        prop_assert_eq!(back, a.truncate(TRUNC / k).unwrap());
    }

    #[test]
    fn reduction_commutes_with_product(a in exact_series(), b in exact_series(), m in 2u64..40) {
        let lhs = (&a * &b).reduce_mod(m).unwrap();
        let rhs = &a.reduce_mod(m).unwrap() * &b.reduce_mod(m).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pow_matches_repeated_product(a in unit_series(), e in -3i64..4) {
        let mut expected = Series::one(Ring::Exact, TRUNC);
        let base = if e < 0 { a.invert().unwrap() } else { a.clone() };
        for _ in 0..e.unsigned_abs() {
            expected = &expected * &base;
        }
        prop_assert_eq!(a.pow(e).unwrap(), expected);
    }

    #[test]
    fn legendre_is_multiplicative(a in -200i64..200, b in -200i64..200, p in small_prime()) {
        let ab = legendre(a * b, p).unwrap();
        prop_assert_eq!(ab, legendre(a, p).unwrap() * legendre(b, p).unwrap());
    }

    #[test]
    fn modular_construction_matches_reduction(t in 2u64..10, s in 1u64..10, m in 2u64..9) {
        prop_assume!(s < t);
        let exact = Factory::exact(60).qts_series(t, s).unwrap();
        let modular = Factory::new(Ring::Mod(m), 60).qts_series(t, s).unwrap();
        prop_assert_eq!(exact.reduce_mod(m).unwrap(), modular);
    }

    #[test]
    fn oracle_matches_unsquared_product(t in 2u64..13, s in 1u64..13) {
        prop_assume!(s < t);
        let spec = PartitionSpec::new(t, s).unwrap();
        let product = Factory::exact(80).qts_product(t, s, false).unwrap();
        for (n, c) in oracle::table_qts(spec, 80).into_iter().enumerate() {
            prop_assert_eq!(product.coeff(n), BigInt::from(c));
        }
    }

    /// The `j = 0` class is excluded from the T31/T32 claims and does not
    /// vanish: it carries the leading term of the p-dissection.
    #[test]
    fn excluded_class_fails(
        family in prop::sample::select(vec![Family::T31, Family::T32]),
        alpha in 1u64..4,
        p in prop::sample::select(vec![5u64, 7, 11, 13]),
    ) {
        let claims = theorems::instantiate(family, &InstanceParams::alpha_p(alpha, p, 0));
        prop_assume!(claims.is_ok());
        let mut excluded = claims.unwrap()[0].clone();
        excluded.progression.b -= p;
        let r = theorems::verify_claim(&excluded, 30, DEFAULT_MAX_TRUNC).unwrap();
        prop_assert!(!r.passed(), "{}", excluded.statement());
    }

    #[test]
    fn series_and_squared_agree(t in 2u64..9, s in 1u64..9) {
        prop_assume!(s < t);
        let spec = PartitionSpec::new(t, s).unwrap();
        let a = theorems::q_values(spec, Convention::Series, 60, Ring::Mod(4)).unwrap();
        let b = theorems::q_values(spec, Convention::Squared, 60, Ring::Mod(4)).unwrap();
        prop_assert_eq!(a, b);
    }
}
