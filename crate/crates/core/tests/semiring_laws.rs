//! Algebraic laws of the semiring instances, checked on random values.

mod common;

use common::{semiring, values, with_monus};
use krel::{Semiring, Value};
use proptest::prelude::*;

fn add(k: Semiring, a: &Value, b: &Value) -> Value {
    k.add(a, b).unwrap()
}

fn mul(k: Semiring, a: &Value, b: &Value) -> Value {
    k.mul(a, b).unwrap()
}

fn monus(k: Semiring, a: &Value, b: &Value) -> Value {
    k.monus(a, b).unwrap()
}

proptest! {
    #![proptest_config(common::config(2000))]

    #[test]
    fn commutative_semiring_axioms((k, v) in values(semiring(), 3)) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(add(k, a, b), add(k, b, a));
        prop_assert_eq!(mul(k, a, b), mul(k, b, a));
        prop_assert_eq!(add(k, &add(k, a, b), c), add(k, a, &add(k, b, c)));
        prop_assert_eq!(mul(k, &mul(k, a, b), c), mul(k, a, &mul(k, b, c)));
        prop_assert_eq!(&add(k, a, &k.zero()), a);
        prop_assert_eq!(&mul(k, a, &k.one()), a);
        prop_assert_eq!(mul(k, a, &k.zero()), k.zero());
        prop_assert_eq!(mul(k, a, &add(k, b, c)), add(k, &mul(k, a, b), &mul(k, a, c)));
    }

    #[test]
    fn operations_stay_in_the_carrier((k, v) in values(semiring(), 2)) {
        prop_assert!(k.contains(&add(k, &v[0], &v[1])));
        prop_assert!(k.contains(&mul(k, &v[0], &v[1])));
        let s = k.support(&v[0]).unwrap();
        prop_assert!(s == k.zero() || s == k.one());
        prop_assert_eq!(s.is_zero(), v[0].is_zero());
    }

    #[test]
    fn monus_identities((k, v) in values(with_monus(), 3)) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(monus(k, a, a), k.zero());
        prop_assert_eq!(monus(k, &k.zero(), a), k.zero());
        prop_assert_eq!(add(k, a, &monus(k, b, a)), add(k, b, &monus(k, a, b)));
        prop_assert_eq!(monus(k, a, &add(k, b, c)), monus(k, &monus(k, a, b), c));
        prop_assert!(k.contains(&monus(k, a, b)));
    }

    #[test]
    fn monus_is_the_galois_residual((k, v) in values(with_monus(), 3)) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        let left = k.nat_leq(&monus(k, a, b), c).unwrap();
        let right = k.nat_leq(a, &add(k, b, c)).unwrap();
        prop_assert_eq!(left, right, "{} ∸ {} ⪯ {}", a, b, c);
    }

    #[test]
    fn natural_order_is_a_partial_order(
        (k, v) in values(semiring().prop_filter("decidable", |k| k.descriptor().order_decidable), 3)
    ) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert!(k.nat_leq(a, a).unwrap());
        prop_assert!(k.nat_leq(&k.zero(), a).unwrap());
        prop_assert!(k.nat_leq(a, &add(k, a, b)).unwrap());
        if k.nat_leq(a, b).unwrap() && k.nat_leq(b, a).unwrap() {
            prop_assert_eq!(a, b);
        }
        if k.nat_leq(a, b).unwrap() && k.nat_leq(b, c).unwrap() {
            prop_assert!(k.nat_leq(a, c).unwrap());
        }
    }

    #[test]
    fn descriptor_flags_hold((k, v) in values(semiring(), 2)) {
        let d = k.descriptor();
        let (a, b) = (&v[0], &v[1]);
        if d.zero_sum_free && add(k, a, b).is_zero() {
            prop_assert!(a.is_zero() && b.is_zero());
        }
        if d.no_zero_divisors && mul(k, a, b).is_zero() {
            prop_assert!(a.is_zero() || b.is_zero());
        }
        prop_assert_eq!(d.positive, d.zero_sum_free && d.no_zero_divisors);
    }

    #[test]
    fn text_and_json_encodings_round_trip((k, v) in values(semiring(), 1)) {
        let v = &v[0];
        prop_assert_eq!(&k.parse_value(&v.to_string()).unwrap(), v);
        prop_assert_eq!(&k.value_from_json(&k.value_to_json(v)).unwrap(), v);
    }
}

#[test]
fn boolean_axioms_exhaustively() {
    let k = Semiring::Boolean;
    let all = [Value::Bool(false), Value::Bool(true)];
    for a in &all {
        for b in &all {
            for c in &all {
                assert_eq!(
                    mul(k, a, &add(k, b, c)),
                    add(k, &mul(k, a, b), &mul(k, a, c))
                );
                assert_eq!(add(k, &add(k, a, b), c), add(k, a, &add(k, b, c)));
                assert_eq!(
                    k.nat_leq(&monus(k, a, b), c).unwrap(),
                    k.nat_leq(a, &add(k, b, c)).unwrap()
                );
            }
        }
    }
}

#[test]
fn flag_witnesses() {
    let z = Semiring::Integer;
    assert!(add(z, &Value::int(1), &Value::int(-1)).is_zero());
    let l = Semiring::Lukasiewicz;
    assert!(mul(l, &Value::unit(1, 2), &Value::unit(1, 2)).is_zero());
    assert!(Semiring::Security
        .monus(&Semiring::Security.one(), &Semiring::Security.one())
        .is_err());
    assert!(z.nat_leq(&Value::int(1), &Value::int(2)).is_err());
}
