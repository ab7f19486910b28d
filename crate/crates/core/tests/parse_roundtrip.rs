//! Printing then parsing gives back the same tree, for both grammars.

mod common;

use krel::{AlgebraExpr, Condition, Formula};
use proptest::prelude::*;

fn condition() -> impl Strategy<Value = Condition> {
    let leaf = prop_oneof![
        (1usize..6, 1usize..6).prop_map(|(i, j)| Condition::Eq(i, j)),
        (1usize..6, 1usize..6).prop_map(|(i, j)| Condition::Neq(i, j)),
    ];
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Condition::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Condition::or(a, b)),
        ]
    })
}

fn algebra() -> impl Strategy<Value = AlgebraExpr> {
    let leaf = proptest::sample::select(vec!["R", "S", "T", "Edge2"]).prop_map(AlgebraExpr::rel);
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| AlgebraExpr::union(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| AlgebraExpr::diff(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| AlgebraExpr::product(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| AlgebraExpr::div(a, b)),
            (proptest::collection::vec(1usize..6, 0..4), inner.clone())
                .prop_map(|(v, e)| AlgebraExpr::project(v, e)),
            (condition(), inner.clone()).prop_map(|(c, e)| AlgebraExpr::select(c, e)),
            inner.prop_map(AlgebraExpr::supp),
        ]
    })
}

fn var() -> impl Strategy<Value = String> {
    proptest::sample::select(vec!["x", "y1", "y2", "z", "v10"]).prop_map(str::to_string)
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        (var(), var()).prop_map(|(x, y)| Formula::Eq(x, y)),
        (
            proptest::sample::select(vec!["R", "S", "T"]),
            proptest::collection::vec(var(), 0..4)
        )
            .prop_map(|(r, args)| Formula::Atom(r.to_string(), args)),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::but_not(a, b)),
            inner.clone().prop_map(Formula::nabla),
            (var(), inner.clone()).prop_map(|(y, f)| Formula::Exists(y, Box::new(f))),
            (var(), inner).prop_map(|(y, f)| Formula::Forall(y, Box::new(f))),
        ]
    })
}

proptest! {
    #![proptest_config(common::config(1000))]

    #[test]
    fn algebra_round_trips(e in algebra()) {
        let text = e.to_string();
        let back = AlgebraExpr::parse(&text);
        prop_assert_eq!(back.as_ref().ok(), Some(&e), "{} gave {:?}", text, back);
    }

    #[test]
    fn formulas_round_trip(f in formula()) {
        let text = f.to_string();
        let back = Formula::parse(&text);
        prop_assert_eq!(back.as_ref().ok(), Some(&f), "{} gave {:?}", text, back);
    }

    #[test]
    fn ast_json_round_trips(e in algebra(), f in formula()) {
        let ej = serde_json::to_string(&e).unwrap();
        prop_assert_eq!(serde_json::from_str::<AlgebraExpr>(&ej).unwrap(), e);
        let fj = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<Formula>(&fj).unwrap(), f);
    }
}

#[test]
fn malformed_input_reports_a_position() {
    for text in ["union(R,", "proj[1,](R)", "select[#1=](R)", "R S"] {
        assert!(
            matches!(AlgebraExpr::parse(text), Err(krel::Error::Syntax { .. })),
            "{text}"
        );
    }
    for text in ["exists . R(x)", "R(x", "x =", "nabla", "and"] {
        assert!(
            matches!(Formula::parse(text), Err(krel::Error::Syntax { .. })),
            "{text}"
        );
    }
}
