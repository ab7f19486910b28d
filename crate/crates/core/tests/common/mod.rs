//! Strategies shared by the property tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use krel::relation::tuple;
use krel::semiring::{Monomial, Polynomial};
use krel::{KRelation, Level, Semiring, Value};
use proptest::prelude::*;

pub const ELEMS: [&str; 3] = ["a", "b", "c"];

fn poly_term() -> impl Strategy<Value = Polynomial> {
    (1u32..4, 0u32..3, 0u32..3).prop_map(|(c, ex, ey)| {
        let mut m = BTreeMap::new();
        if ex > 0 {
            m.insert("x".to_string(), ex);
        }
        if ey > 0 {
            m.insert("y".to_string(), ey);
        }
        Polynomial::term(c.into(), Monomial::new(m))
    })
}

/// Arbitrary values of `k`, zero included, from small ranges so that
/// collisions (and hence the interesting cases) are common.
pub fn value(k: Semiring) -> BoxedStrategy<Value> {
    match k {
        Semiring::Boolean => any::<bool>().prop_map(Value::Bool).boxed(),
        Semiring::Bag => (0u64..12).prop_map(Value::nat).boxed(),
        Semiring::Tropical => prop_oneof![
            1 => Just(Semiring::Tropical.zero()),
            5 => (0u64..12).prop_map(Value::trop),
        ]
        .boxed(),
        Semiring::Fuzzy | Semiring::Lukasiewicz => (1i64..9)
            .prop_flat_map(|q| (0..=q, Just(q)))
            .prop_map(|(p, q)| Value::unit(p, q))
            .boxed(),
        Semiring::Provenance => proptest::collection::vec(poly_term(), 0..3)
            .prop_map(|ts| Value::Poly(ts.iter().fold(Polynomial::zero(), |acc, t| acc.add(t))))
            .boxed(),
        Semiring::Security => prop_oneof![
            1 => Just(Semiring::Security.zero()),
            5 => (1u64..6, proptest::sample::select(Level::ALL.to_vec()))
                .prop_map(|(x, l)| Value::sec(x, l)),
        ]
        .boxed(),
        Semiring::Integer => (-8i64..8).prop_map(Value::int).boxed(),
    }
}

pub fn semiring() -> impl Strategy<Value = Semiring> {
    proptest::sample::select(Semiring::ALL.to_vec())
}

pub fn with_monus() -> impl Strategy<Value = Semiring> {
    proptest::sample::select(
        Semiring::ALL
            .into_iter()
            .filter(|k| k.descriptor().has_monus)
            .collect::<Vec<_>>(),
    )
}

/// A semiring together with `n` of its values.
pub fn values(
    k: impl Strategy<Value = Semiring>,
    n: usize,
) -> impl Strategy<Value = (Semiring, Vec<Value>)> {
    k.prop_flat_map(move |k| (Just(k), proptest::collection::vec(value(k), n)))
}

/// A relation of the given arity over `a`, `b`, `c`; repeated tuples accumulate.
pub fn relation(k: Semiring, arity: usize) -> impl Strategy<Value = KRelation> {
    let t = proptest::collection::vec(proptest::sample::select(ELEMS.to_vec()), arity);
    proptest::collection::vec((t, value(k)), 0..8).prop_map(move |rows| {
        KRelation::from_rows(k, arity, rows.into_iter().map(|(t, v)| (tuple(&t), v)))
            .expect("well-formed")
    })
}

pub fn assert_no_zeros(r: &KRelation) {
    for (t, v) in r.rows() {
        assert!(!v.is_zero(), "stored zero at {t:?}");
        assert_eq!(t.len(), r.arity());
    }
}

/// `cases` cases from a fixed seed, without the on-disk regression file.
/// Nested quantifiers over provenance polynomials can get very expensive,
/// so a fixed seed keeps run times predictable.
pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        rng_seed: proptest::test_runner::RngSeed::Fixed(0x6b72_656c),
        ..ProptestConfig::default()
    }
}
