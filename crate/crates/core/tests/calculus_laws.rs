//! Semantics of the calculus on random structures.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use krel::harness::{default_schema, fresh_elements, gen_database, gen_formula, GenConfig};
use krel::relation::tuple;
use krel::{Assignment, Elem, Formula, KDatabase, KRelation, KStructure, Semiring, Tuple};
use proptest::prelude::*;

fn tuples_over(universe: &BTreeSet<Elem>, arity: usize) -> Vec<Tuple> {
    (0..arity).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|t| {
                universe.iter().map(move |e| {
                    let mut t = t.clone();
                    t.push(e.clone());
                    t
                })
            })
            .collect()
    })
}

/// A random database, a random formula and a structure over the active
/// domain plus `extra` fresh elements.
#[derive(Debug)]
struct Case {
    db: KDatabase,
    phi: Formula,
    psi: Formula,
    extra: usize,
}

impl Case {
    fn structure(&self) -> KStructure {
        let mut universe = self.db.active_domain();
        universe.extend(fresh_elements(&universe, self.extra));
        KStructure::with_universe(&self.db, universe).unwrap()
    }
}

fn case(kinds: Vec<Semiring>) -> impl Strategy<Value = Case> {
    (
        proptest::sample::select(kinds),
        any::<u64>(),
        1usize..4,
        0usize..2,
    )
        .prop_map(|(k, seed, depth, extra)| {
            let schema = default_schema();
            let mut cfg = GenConfig::new(k, seed);
            cfg.max_depth = depth;
            cfg.allow_forall = true;
            Case {
                db: gen_database(&cfg, &schema),
                phi: gen_formula(&cfg, &schema),
                psi: gen_formula(&cfg.with_seed(seed.wrapping_add(1)), &schema),
                extra,
            }
        })
}

fn any_case() -> impl Strategy<Value = Case> {
    case(Semiring::ALL.to_vec())
}

fn monus_case() -> impl Strategy<Value = Case> {
    case(
        Semiring::ALL
            .into_iter()
            .filter(|k| k.descriptor().has_monus)
            .collect(),
    )
}

/// `ψ` rewritten to have exactly the free-variable list `vars`: extra free
/// variables are bound existentially and missing ones are added by `v = v`.
fn with_free_vars(psi: &Formula, vars: &[String]) -> Formula {
    let mut out = psi.clone();
    for v in psi.free_vars().unwrap() {
        if !vars.contains(&v) {
            out = Formula::exists(&v, out);
        }
    }
    let prefix = vars.iter().map(|v| Formula::eq(v, v)).reduce(Formula::and);
    match prefix {
        Some(p) => Formula::and(p, out),
        None => out,
    }
}

proptest! {
    #![proptest_config(common::config(300))]

    #[test]
    fn tables_agree_with_pointwise_evaluation(c in any_case()) {
        let a = c.structure();
        let fv = c.phi.free_vars().unwrap();
        let table = c.phi.relation_of(&a).unwrap();
        common::assert_no_zeros(&table);
        prop_assert_eq!(table.arity(), fv.len());
        for t in tuples_over(a.universe(), fv.len()) {
            let alpha: Assignment = fv.iter().cloned().zip(t.iter().cloned()).collect();
            prop_assert_eq!(table.get(&t), c.phi.eval_at(&a, &alpha).unwrap(), "{} at {:?}", c.phi, t);
        }
    }

    #[test]
    fn support_stays_inside_the_universe(c in any_case()) {
        let a = c.structure();
        let table = c.phi.relation_of(&a).unwrap();
        for t in table.support_tuples() {
            prop_assert!(t.iter().all(|e| a.universe().contains(e)));
        }
    }

    #[test]
    fn only_free_variables_matter(c in any_case(), picks in proptest::collection::vec(0usize..16, 16)) {
        let a = c.structure();
        let universe: Vec<&Elem> = a.universe().iter().collect();
        let fv = c.phi.free_vars().unwrap();
        let mut picks = picks.into_iter().cycle();
        let mut pick = || universe[picks.next().unwrap() % universe.len()].clone();
        let base: Assignment = fv.iter().map(|v| (v.clone(), pick())).collect();
        let mut perturbed = base.clone();
        for v in c.phi.all_vars().into_iter().chain(["unused".to_string()]) {
            if !fv.contains(&v) {
                perturbed.insert(v, pick());
            }
        }
        prop_assert_eq!(c.phi.eval_at(&a, &base).unwrap(), c.phi.eval_at(&a, &perturbed).unwrap());
    }

    #[test]
    fn disjunction_is_union(c in any_case()) {
        let a = c.structure();
        let fv = c.phi.free_vars().unwrap();
        let psi = with_free_vars(&c.psi, &fv);
        prop_assert_eq!(psi.free_vars().unwrap(), fv.clone());
        let or = Formula::or(c.phi.clone(), psi.clone()).relation_of(&a).unwrap();
        let union = c.phi.relation_of(&a).unwrap().union(&psi.relation_of(&a).unwrap()).unwrap();
        prop_assert_eq!(or, union);
    }

    #[test]
    fn but_not_is_difference(c in monus_case()) {
        let a = c.structure();
        let fv = c.phi.free_vars().unwrap();
        let psi = with_free_vars(&c.psi, &fv);
        let bn = Formula::but_not(c.phi.clone(), psi.clone()).relation_of(&a).unwrap();
        let diff = c.phi.relation_of(&a).unwrap().difference(&psi.relation_of(&a).unwrap()).unwrap();
        prop_assert_eq!(bn, diff);
    }

    #[test]
    fn conjunction_of_disjoint_formulas_is_product(c in any_case()) {
        let a = c.structure();
        let renaming: BTreeMap<String, String> = c
            .psi
            .free_vars()
            .unwrap()
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, format!("w{}", i + 1)))
            .collect();
        let psi = c.psi.rename_free(&renaming);
        let and = Formula::and(c.phi.clone(), psi.clone()).relation_of(&a).unwrap();
        let product = c.phi.relation_of(&a).unwrap().product(&psi.relation_of(&a).unwrap()).unwrap();
        prop_assert_eq!(and, product);
    }

    #[test]
    fn nabla_is_support(c in any_case()) {
        let a = c.structure();
        let nabla = Formula::nabla(c.phi.clone()).relation_of(&a).unwrap();
        prop_assert_eq!(nabla, c.phi.relation_of(&a).unwrap().support());
    }

    #[test]
    fn exists_projects_the_variable_away(c in any_case(), which in any::<prop::sample::Index>()) {
        let fv = c.phi.free_vars().unwrap();
        prop_assume!(!fv.is_empty());
        let a = c.structure();
        let i = which.index(fv.len());
        let keep: Vec<usize> = (1..=fv.len()).filter(|&j| j != i + 1).collect();
        let ex = Formula::exists(&fv[i], c.phi.clone()).relation_of(&a).unwrap();
        prop_assert_eq!(ex, c.phi.relation_of(&a).unwrap().project(&keep).unwrap());
    }

    #[test]
    fn atoms_over_distinct_variables_are_the_relation(c in any_case()) {
        let a = c.structure();
        for (name, arity) in c.db.schema().iter() {
            let vars: Vec<String> = (1..=arity).map(|i| format!("y{i}")).collect();
            let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
            let atom = Formula::atom(name, &refs).relation_of(&a).unwrap();
            prop_assert_eq!(&atom, c.db.relation(name).unwrap());
        }
    }
}

#[test]
fn forall_multiplies_over_the_universe() {
    let k = Semiring::Bag;
    let schema = krel::Schema::new([("R", 1)]).unwrap();
    let mut db = KDatabase::new(k, schema);
    let rows = [("a", 2u64), ("b", 3)].map(|(e, n)| (tuple(&[e]), krel::Value::nat(n)));
    db.set_relation("R", KRelation::from_rows(k, 1, rows).unwrap())
        .unwrap();
    let a = KStructure::from_database(&db).unwrap();
    let f = Formula::parse("forall y. R(y)").unwrap();
    assert_eq!(
        f.eval_at(&a, &Assignment::new()).unwrap(),
        krel::Value::nat(6)
    );
    let wider =
        KStructure::with_universe(&db, ["a", "b", "c"].into_iter().map(Elem::new).collect())
            .unwrap();
    assert!(f.eval_at(&wider, &Assignment::new()).unwrap().is_zero());
}
