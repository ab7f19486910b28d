//! Translations between relational algebra and relational calculus.
//!
//! Algebra outputs of [`calculus_to_algebra`] always list their columns in
//! the canonical free-variable order of the input formula. Calculus outputs
//! of [`algebra_to_calculus`] carry a witness naming the variable behind each
//! column of the input expression.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::AlgebraExpr;
use crate::calculus::{Formula, Var};
use crate::error::{Error, Result};
use crate::relation::{Condition, Schema};
use crate::semiring::Semiring;

/// What the semiring must satisfy for a translation to preserve semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Capability {
    ZeroSumFree,
    Positive,
}

impl Capability {
    pub fn satisfied_by(self, k: Semiring) -> bool {
        let d = k.descriptor();
        match self {
            Capability::ZeroSumFree => d.zero_sum_free,
            Capability::Positive => d.positive,
        }
    }

    pub fn check(self, k: Semiring) -> Result<()> {
        if self.satisfied_by(k) {
            Ok(())
        } else {
            Err(Error::Capability {
                semiring: k.name(),
                required: self.name(),
            })
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Capability::ZeroSumFree => "zero-sum-free",
            Capability::Positive => "positive",
        }
    }
}

impl fmt::Display for Capability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A translated query together with its column witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translation<T> {
    pub output: T,
    /// The variable of each output column, in column order.
    pub witness: Vec<Var>,
    pub requires: Capability,
}

/// `supp(π₁(R₁) ∪ … ∪ π_n(R_k))` over every relation and column.
pub fn adom_expr(schema: &Schema) -> Result<AlgebraExpr> {
    let mut cols = schema.iter().flat_map(|(name, n)| {
        (1..=n).map(move |j| AlgebraExpr::project(vec![j], AlgebraExpr::rel(name)))
    });
    let first = cols
        .next()
        .ok_or_else(|| Error::Database("the active domain needs a nonempty schema".into()))?;
    Ok(AlgebraExpr::supp(cols.fold(first, AlgebraExpr::union)))
}

/// The sentence `∇∃z(z = z)`.
pub fn eta(z: &str) -> Formula {
    Formula::nabla(Formula::exists(z, Formula::eq(z, z)))
}

struct Fresh(usize);

impl Fresh {
    fn var(&mut self) -> Var {
        self.0 += 1;
        format!("x{}", self.0)
    }
}

pub fn algebra_to_calculus(e: &AlgebraExpr, schema: &Schema) -> Result<Translation<Formula>> {
    e.arity(schema)?;
    let mut fresh = Fresh(0);
    let (output, witness) = a2c(e, schema, &mut fresh)?;
    let requires = if e.contains_div() {
        Capability::Positive
    } else {
        Capability::ZeroSumFree
    };
    Ok(Translation {
        output,
        witness,
        requires,
    })
}

fn rename_onto(f: &Formula, from: &[Var], to: &[Var]) -> Formula {
    let map: BTreeMap<Var, Var> = from.iter().cloned().zip(to.iter().cloned()).collect();
    f.rename_free(&map)
}

fn condition_formula(cond: &Condition, w: &[Var]) -> Formula {
    match cond {
        Condition::Eq(i, j) => Formula::Eq(w[i - 1].clone(), w[j - 1].clone()),
        Condition::Neq(i, j) => Formula::neq(&w[i - 1], &w[j - 1]),
        Condition::And(a, b) => Formula::and(condition_formula(a, w), condition_formula(b, w)),
        Condition::Or(a, b) => Formula::or(condition_formula(a, w), condition_formula(b, w)),
    }
}

fn exists_all(vars: &[Var], f: Formula) -> Formula {
    vars.iter().rev().fold(f, |acc, y| Formula::exists(y, acc))
}

fn forall_all(vars: &[Var], f: Formula) -> Formula {
    vars.iter().rev().fold(f, |acc, y| Formula::forall(y, acc))
}

fn a2c(e: &AlgebraExpr, schema: &Schema, fresh: &mut Fresh) -> Result<(Formula, Vec<Var>)> {
    Ok(match e {
        AlgebraExpr::Rel(name) => {
            let vars: Vec<Var> = (0..schema.arity(name)?).map(|_| fresh.var()).collect();
            (Formula::Atom(name.clone(), vars.clone()), vars)
        }
        AlgebraExpr::Union(a, b) | AlgebraExpr::Diff(a, b) => {
            let (fa, wa) = a2c(a, schema, fresh)?;
            let (fb, wb) = a2c(b, schema, fresh)?;
            let fb = rename_onto(&fb, &wb, &wa);
            let f = match e {
                AlgebraExpr::Union(..) => Formula::or(fa, fb),
                _ => Formula::but_not(fa, fb),
            };
            (f, wa)
        }
        AlgebraExpr::Product(a, b) => {
            let (fa, mut wa) = a2c(a, schema, fresh)?;
            let (fb, wb) = a2c(b, schema, fresh)?;
            wa.extend(wb);
            (Formula::and(fa, fb), wa)
        }
        AlgebraExpr::Project(v, a) => {
            let (fa, wa) = a2c(a, schema, fresh)?;
            let kept: Vec<Var> = v.iter().map(|i| wa[i - 1].clone()).collect();
            let dropped: Vec<Var> = wa.iter().filter(|x| !kept.contains(x)).cloned().collect();
            (exists_all(&dropped, fa), kept)
        }
        AlgebraExpr::Select(cond, a) => {
            let (fa, wa) = a2c(a, schema, fresh)?;
            let theta = condition_formula(cond, &wa);
            (Formula::and(fa, Formula::nabla(theta)), wa)
        }
        AlgebraExpr::Supp(a) => {
            let (fa, wa) = a2c(a, schema, fresh)?;
            (Formula::nabla(fa), wa)
        }
        AlgebraExpr::Div(a, b) => {
            // (∇∃ȳ φ₁) ∧ ∀ȳ((η ∸ ∇φ₂) ∨ (∇φ₂ ∧ φ₁)), with φ₂ over ȳ
            let (f1, w1) = a2c(a, schema, fresh)?;
            let (f2, w2) = a2c(b, schema, fresh)?;
            let split = w1.len() - w2.len();
            let (prefix, ys) = w1.split_at(split);
            let f2 = Formula::nabla(rename_onto(&f2, &w2, ys));
            let eta = eta(&fresh.var());
            let body = Formula::or(
                Formula::but_not(eta, f2.clone()),
                Formula::and(f2, f1.clone()),
            );
            let guard = Formula::nabla(exists_all(ys, f1));
            (Formula::and(guard, forall_all(ys, body)), prefix.to_vec())
        }
    })
}

pub fn calculus_to_algebra(f: &Formula, schema: &Schema) -> Result<Translation<AlgebraExpr>> {
    f.check(schema)?;
    let adom = adom_expr(schema)?;
    let (output, witness) = c2a(f, &adom)?;
    let requires = if f.contains_forall() {
        Capability::Positive
    } else {
        Capability::ZeroSumFree
    };
    Ok(Translation {
        output,
        witness,
        requires,
    })
}

/// Reorders and pads `e`, whose columns follow `have`, to columns `want`.
/// Variables of `want` missing from `have` range over the active domain.
pub fn pad_align(
    e: AlgebraExpr,
    have: &[Var],
    want: &[Var],
    adom: &AlgebraExpr,
) -> Result<AlgebraExpr> {
    if have == want {
        return Ok(e);
    }
    if have.iter().any(|v| !want.contains(v)) {
        return Err(Error::NotSubset {
            have: have.to_vec(),
            want: want.to_vec(),
        });
    }
    let mut ext = have.to_vec();
    let mut padded = e;
    for v in want.iter().filter(|v| !have.contains(v)) {
        ext.push(v.clone());
        padded = AlgebraExpr::product(padded, adom.clone());
    }
    let cols = want
        .iter()
        .map(|v| ext.iter().position(|w| w == v).unwrap() + 1)
        .collect();
    Ok(AlgebraExpr::project(cols, padded))
}

fn dedup(vars: &[Var]) -> Vec<Var> {
    let mut out: Vec<Var> = Vec::new();
    for v in vars {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    out
}

fn merge(a: &[Var], b: &[Var]) -> Vec<Var> {
    let mut out = a.to_vec();
    out.extend(b.iter().filter(|v| !a.contains(v)).cloned());
    out
}

fn conjoin(conds: Vec<Condition>) -> Option<Condition> {
    conds.into_iter().reduce(Condition::and)
}

fn c2a(f: &Formula, adom: &AlgebraExpr) -> Result<(AlgebraExpr, Vec<Var>)> {
    Ok(match f {
        Formula::Eq(x, y) if x == y => (adom.clone(), vec![x.clone()]),
        Formula::Eq(x, y) => {
            let pairs = AlgebraExpr::product(adom.clone(), adom.clone());
            let e = AlgebraExpr::supp(AlgebraExpr::select(Condition::Eq(1, 2), pairs));
            (e, vec![x.clone(), y.clone()])
        }
        Formula::Atom(name, args) => {
            let vars = dedup(args);
            let rel = AlgebraExpr::rel(name);
            if vars.len() == args.len() {
                return Ok((rel, vars));
            }
            let first: Vec<usize> = vars
                .iter()
                .map(|v| args.iter().position(|a| a == v).unwrap() + 1)
                .collect();
            let eqs = args
                .iter()
                .enumerate()
                .filter_map(|(i, a)| {
                    let j = args.iter().position(|b| b == a).unwrap();
                    (j < i).then_some(Condition::Eq(j + 1, i + 1))
                })
                .collect();
            let sel = AlgebraExpr::select(conjoin(eqs).expect("a repeated variable"), rel);
            (AlgebraExpr::project(first, sel), vars)
        }
        Formula::Or(a, b) | Formula::ButNot(a, b) => {
            let (ea, wa) = c2a(a, adom)?;
            let (eb, wb) = c2a(b, adom)?;
            let want = merge(&wa, &wb);
            let ea = pad_align(ea, &wa, &want, adom)?;
            let eb = pad_align(eb, &wb, &want, adom)?;
            let e = match f {
                Formula::Or(..) => AlgebraExpr::union(ea, eb),
                _ => AlgebraExpr::diff(ea, eb),
            };
            (e, want)
        }
        Formula::And(a, b) => {
            let (ea, wa) = c2a(a, adom)?;
            let (eb, wb) = c2a(b, adom)?;
            let p = wa.len();
            let shared: Vec<Condition> = wb
                .iter()
                .enumerate()
                .filter_map(|(j, v)| {
                    wa.iter()
                        .position(|w| w == v)
                        .map(|i| Condition::Eq(i + 1, p + j + 1))
                })
                .collect();
            let want = merge(&wa, &wb);
            let prod = AlgebraExpr::product(ea, eb);
            let Some(cond) = conjoin(shared) else {
                return Ok((prod, want));
            };
            let cols = (1..=p)
                .chain(
                    wb.iter()
                        .enumerate()
                        .filter(|(_, v)| !wa.contains(v))
                        .map(|(j, _)| p + j + 1),
                )
                .collect();
            (
                AlgebraExpr::project(cols, AlgebraExpr::select(cond, prod)),
                want,
            )
        }
        Formula::Nabla(a) => {
            let (ea, wa) = c2a(a, adom)?;
            (AlgebraExpr::supp(ea), wa)
        }
        Formula::Exists(y, a) => {
            let (ea, wa) = c2a(a, adom)?;
            let pos = wa
                .iter()
                .position(|v| v == y)
                .ok_or_else(|| Error::NotFree(y.clone()))?;
            let cols = (1..=wa.len()).filter(|&i| i != pos + 1).collect();
            let rest = wa.iter().filter(|v| *v != y).cloned().collect();
            (AlgebraExpr::project(cols, ea), rest)
        }
        Formula::Forall(y, a) => {
            let (ea, wa) = c2a(a, adom)?;
            let pos = wa
                .iter()
                .position(|v| v == y)
                .ok_or_else(|| Error::NotFree(y.clone()))?;
            let rest: Vec<Var> = wa.iter().filter(|v| *v != y).cloned().collect();
            let dividend = if pos + 1 == wa.len() {
                ea
            } else {
                let cols = (1..=wa.len())
                    .filter(|&i| i != pos + 1)
                    .chain([pos + 1])
                    .collect();
                AlgebraExpr::project(cols, ea)
            };
            (AlgebraExpr::div(dividend, adom.clone()), rest)
        }
    })
}
