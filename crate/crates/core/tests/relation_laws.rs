//! K-relation operations against pointwise oracles.

mod common;

use std::collections::BTreeSet;

use common::{assert_no_zeros, relation, semiring, with_monus, ELEMS};
use krel::relation::tuple;
use krel::{Condition, Elem, KDatabase, KRelation, Schema, Semiring, Tuple, Value};
use proptest::prelude::*;

/// Every tuple of the given arity over `a`, `b`, `c`.
fn all_tuples(arity: usize) -> Vec<Tuple> {
    (0..arity).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|t| {
                ELEMS.iter().map(move |e| {
                    let mut t = t.clone();
                    t.push(Elem::new(e));
                    t
                })
            })
            .collect()
    })
}

fn pair(k: Semiring, n1: usize, n2: usize) -> impl Strategy<Value = (KRelation, KRelation)> {
    (relation(k, n1), relation(k, n2))
}

fn two_of_arity(
    k: impl Strategy<Value = Semiring>,
    n: usize,
) -> impl Strategy<Value = (KRelation, KRelation)> {
    k.prop_flat_map(move |k| pair(k, n, n))
}

proptest! {
    #![proptest_config(common::config(500))]

    #[test]
    fn union_is_pointwise_sum((r1, r2) in two_of_arity(semiring(), 2)) {
        let k = r1.semiring();
        let u = r1.union(&r2).unwrap();
        assert_no_zeros(&u);
        for t in all_tuples(2) {
            prop_assert_eq!(u.get(&t), k.add(&r1.get(&t), &r2.get(&t)).unwrap());
        }
    }

    #[test]
    fn difference_is_pointwise_monus((r1, r2) in two_of_arity(with_monus(), 2)) {
        let k = r1.semiring();
        let d = r1.difference(&r2).unwrap();
        assert_no_zeros(&d);
        for t in all_tuples(2) {
            prop_assert_eq!(d.get(&t), k.monus(&r1.get(&t), &r2.get(&t)).unwrap());
        }
    }

    #[test]
    fn product_multiplies_factors((r1, r2) in semiring().prop_flat_map(|k| pair(k, 1, 2))) {
        let k = r1.semiring();
        let p = r1.product(&r2).unwrap();
        assert_no_zeros(&p);
        prop_assert_eq!(p.arity(), 3);
        for t in all_tuples(3) {
            prop_assert_eq!(p.get(&t), k.mul(&r1.get(&t[..1]), &r2.get(&t[1..])).unwrap());
        }
    }

    #[test]
    fn projection_sums_over_dropped_columns(
        r in semiring().prop_flat_map(|k| relation(k, 3)),
        v in proptest::sample::subsequence(vec![0usize, 1, 2], 0..=3).prop_shuffle(),
    ) {
        let k = r.semiring();
        let p = r.project(&v.iter().map(|i| i + 1).collect::<Vec<_>>()).unwrap();
        assert_no_zeros(&p);
        for target in all_tuples(v.len()) {
            let matching: Vec<Value> = all_tuples(3)
                .into_iter()
                .filter(|t| v.iter().zip(&target).all(|(&i, e)| t[i] == *e))
                .map(|t| r.get(&t))
                .collect();
            prop_assert_eq!(p.get(&target), k.sum(&matching).unwrap());
        }
    }

    #[test]
    fn selection_keeps_satisfying_rows(
        r in semiring().prop_flat_map(|k| relation(k, 2)),
        neq in any::<bool>(),
    ) {
        let cond = if neq { Condition::Neq(1, 2) } else { Condition::Eq(1, 2) };
        let s = r.select(&cond).unwrap();
        assert_no_zeros(&s);
        for t in all_tuples(2) {
            let want = if (t[0] == t[1]) != neq { r.get(&t) } else { r.semiring().zero() };
            prop_assert_eq!(s.get(&t), want);
        }
    }

    #[test]
    fn full_permutation_projection_permutes_columns(r in semiring().prop_flat_map(|k| relation(k, 3))) {
        let p = r.project(&[3, 1, 2]).unwrap();
        let before: Vec<&Value> = {
            let mut v: Vec<_> = r.rows().map(|(_, v)| v).collect();
            v.sort();
            v
        };
        let after: Vec<&Value> = {
            let mut v: Vec<_> = p.rows().map(|(_, v)| v).collect();
            v.sort();
            v
        };
        prop_assert_eq!(before, after);
        for (t, v) in r.rows() {
            prop_assert_eq!(&p.get(&[t[2].clone(), t[0].clone(), t[1].clone()]), v);
        }
    }

    #[test]
    fn support_is_idempotent_and_zero_one(r in semiring().prop_flat_map(|k| relation(k, 2))) {
        let s = r.support();
        prop_assert_eq!(&s.support(), &s);
        prop_assert!(s.rows().all(|(_, v)| *v == r.semiring().one()));
        let have: BTreeSet<_> = s.support_tuples().collect();
        let want: BTreeSet<_> = r.support_tuples().collect();
        prop_assert_eq!(have, want);
    }

    #[test]
    fn division_only_sees_the_divisor_support((r1, r2) in semiring().prop_flat_map(|k| pair(k, 2, 1))) {
        let q = r1.divide(&r2).unwrap();
        assert_no_zeros(&q);
        prop_assert_eq!(q, r1.divide(&r2.support()).unwrap());
    }

    #[test]
    fn division_matches_its_defining_formula((r1, r2) in semiring().prop_flat_map(|k| pair(k, 2, 1))) {
        let k = r1.semiring();
        let q = r1.divide(&r2).unwrap();
        for a in all_tuples(1) {
            let column: Vec<Value> = all_tuples(1)
                .iter()
                .map(|b| r1.get(&[a[0].clone(), b[0].clone()]))
                .collect();
            let guard = k.support(&k.sum(&column).unwrap()).unwrap();
            let factors: Vec<Value> = r2
                .support_tuples()
                .map(|b| r1.get(&[a[0].clone(), b[0].clone()]))
                .collect();
            let want = k.mul(&guard, &k.product(&factors).unwrap()).unwrap();
            prop_assert_eq!(q.get(&a), want);
        }
    }

    #[test]
    fn database_json_round_trips(
        (r1, r2) in semiring().prop_flat_map(|k| pair(k, 2, 1)),
    ) {
        let k = r1.semiring();
        let mut db = KDatabase::new(k, Schema::new([("R", 2), ("S", 1)]).unwrap());
        db.set_relation("R", r1).unwrap();
        db.set_relation("S", r2).unwrap();
        let text = db.to_json().to_string();
        let back = KDatabase::from_json_str(&text).unwrap();
        prop_assert_eq!(back.to_json(), db.to_json());
    }
}

/// Every subset of `items`.
fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    (0..1u32 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

#[test]
fn boolean_division_is_classical_division() {
    let k = Semiring::Boolean;
    let dom = ["a", "b"];
    let pairs: Vec<(&str, &str)> = dom
        .iter()
        .flat_map(|x| dom.iter().map(move |y| (*x, *y)))
        .collect();
    let mut checked = 0;
    for r1 in subsets(&pairs) {
        for r2 in subsets(&dom) {
            let rel1 =
                KRelation::from_rows(k, 2, r1.iter().map(|(x, y)| (tuple(&[x, y]), k.one())))
                    .unwrap();
            let rel2 =
                KRelation::from_rows(k, 1, r2.iter().map(|x| (tuple(&[x]), k.one()))).unwrap();
            let quotient = rel1.divide(&rel2).unwrap();
            let got: BTreeSet<&str> = quotient.support_tuples().map(|t| t[0].as_str()).collect();
            let classical: BTreeSet<&str> = dom
                .iter()
                .copied()
                .filter(|x| r1.iter().any(|(a, _)| a == x))
                .filter(|x| r2.iter().all(|y| r1.contains(&(*x, *y))))
                .collect();
            assert_eq!(got, classical, "R1 = {r1:?}, R2 = {r2:?}");
            checked += 1;
        }
    }
    assert_eq!(checked, 64);
}

#[test]
fn integer_relations_drop_cancelled_rows() {
    let k = Semiring::Integer;
    let r = KRelation::from_rows(
        k,
        1,
        [
            (tuple(&["a"]), Value::int(2)),
            (tuple(&["a"]), Value::int(-2)),
            (tuple(&["b"]), Value::int(1)),
        ],
    )
    .unwrap();
    assert_eq!(r.len(), 1);
    let neg = KRelation::from_rows(k, 1, [(tuple(&["b"]), Value::int(-1))]).unwrap();
    assert!(r.union(&neg).unwrap().is_empty());
}
