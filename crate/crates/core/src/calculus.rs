//! Relational calculus formulas and their semiring semantics.
//!
//! ```text
//! formula := conj ((or | butnot) conj)*
//! conj    := unary (and unary)*
//! unary   := nabla unary
//!          | exists VAR . formula | forall VAR . formula
//!          | ( formula )
//!          | NAME(VAR, ...) | VAR = VAR | VAR != VAR
//! ```
//!
//! Quantifiers scope as far right as possible; `x != y` abbreviates
//! `(x = x) butnot (x = y)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexer::{Cursor, Tok};
use crate::relation::{Elem, KRelation, KStructure, Schema, Tuple};
use crate::semiring::{Semiring, Value};

pub type Var = String;

/// Variable ↦ element; must cover the free variables being evaluated.
pub type Assignment = BTreeMap<Var, Elem>;

const KEYWORDS: [&str; 6] = ["and", "or", "butnot", "nabla", "exists", "forall"];

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula {
    Eq(Var, Var),
    Atom(String, Vec<Var>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    ButNot(Box<Formula>, Box<Formula>),
    Nabla(Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

impl Formula {
    pub fn eq(x: &str, y: &str) -> Self {
        Formula::Eq(x.to_string(), y.to_string())
    }

    /// `x != y`, i.e. `(x = x) butnot (x = y)`.
    pub fn neq(x: &str, y: &str) -> Self {
        Formula::but_not(Formula::eq(x, x), Formula::eq(x, y))
    }

    pub fn atom(name: &str, args: &[&str]) -> Self {
        Formula::Atom(
            name.to_string(),
            args.iter().map(|a| a.to_string()).collect(),
        )
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn but_not(a: Formula, b: Formula) -> Self {
        Formula::ButNot(Box::new(a), Box::new(b))
    }

    pub fn nabla(a: Formula) -> Self {
        Formula::Nabla(Box::new(a))
    }

    pub fn exists(y: &str, a: Formula) -> Self {
        Formula::Exists(y.to_string(), Box::new(a))
    }

    pub fn forall(y: &str, a: Formula) -> Self {
        Formula::Forall(y.to_string(), Box::new(a))
    }

    /// Free variables in order of first occurrence, left to right.
    pub fn free_vars(&self) -> Result<Vec<Var>> {
        let mut out = Vec::new();
        self.collect_free(&mut out)?;
        Ok(out)
    }

    fn collect_free(&self, out: &mut Vec<Var>) -> Result<()> {
        let push = |v: &Var, out: &mut Vec<Var>| {
            if !out.contains(v) {
                out.push(v.clone());
            }
        };
        match self {
            Formula::Eq(x, y) => {
                push(x, out);
                push(y, out);
            }
            Formula::Atom(_, args) => args.iter().for_each(|a| push(a, out)),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::ButNot(a, b) => {
                a.collect_free(out)?;
                b.collect_free(out)?;
            }
            Formula::Nabla(a) => a.collect_free(out)?,
            Formula::Exists(y, a) | Formula::Forall(y, a) => {
                let inner = a.free_vars()?;
                if !inner.contains(y) {
                    return Err(Error::NotFree(y.clone()));
                }
                inner.iter().filter(|v| *v != y).for_each(|v| push(v, out));
            }
        }
        Ok(())
    }

    pub fn is_sentence(&self) -> Result<bool> {
        Ok(self.free_vars()?.is_empty())
    }

    /// Checks relation names and atom arities against `schema`, and that
    /// every quantifier binds a free variable.
    pub fn check(&self, schema: &Schema) -> Result<()> {
        self.free_vars()?;
        self.check_atoms(schema)
    }

    fn check_atoms(&self, schema: &Schema) -> Result<()> {
        match self {
            Formula::Eq(..) => Ok(()),
            Formula::Atom(name, args) => {
                let n = schema.arity(name)?;
                if n != args.len() {
                    return Err(Error::ArityMismatch {
                        left: n,
                        right: args.len(),
                    });
                }
                Ok(())
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::ButNot(a, b) => {
                a.check_atoms(schema)?;
                b.check_atoms(schema)
            }
            Formula::Nabla(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => {
                a.check_atoms(schema)
            }
        }
    }

    fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Eq(..) | Formula::Atom(..) => vec![],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::ButNot(a, b) => vec![a, b],
            Formula::Nabla(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => vec![a],
        }
    }

    fn any_node(&self, pred: &impl Fn(&Formula) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.any_node(pred))
    }

    pub fn contains_forall(&self) -> bool {
        self.any_node(&|f| matches!(f, Formula::Forall(..)))
    }

    pub fn contains_but_not(&self) -> bool {
        self.any_node(&|f| matches!(f, Formula::ButNot(..)))
    }

    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Formula::size)
            .sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Formula::depth)
            .max()
            .unwrap_or(0)
    }

    /// Every variable occurring anywhere, free or bound.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_all(&mut out);
        out
    }

    fn collect_all(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Eq(x, y) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            Formula::Atom(_, args) => out.extend(args.iter().cloned()),
            Formula::Exists(y, a) | Formula::Forall(y, a) => {
                out.insert(y.clone());
                a.collect_all(out);
            }
            _ => self.children().into_iter().for_each(|c| c.collect_all(out)),
        }
    }

    /// Renames free occurrences according to `map`. Targets must not be
    /// bound anywhere in `self`, which callers guarantee by using fresh names.
    pub fn rename_free(&self, map: &BTreeMap<Var, Var>) -> Formula {
        let r = |v: &Var| map.get(v).cloned().unwrap_or_else(|| v.clone());
        match self {
            Formula::Eq(x, y) => Formula::Eq(r(x), r(y)),
            Formula::Atom(n, args) => Formula::Atom(n.clone(), args.iter().map(r).collect()),
            Formula::And(a, b) => Formula::and(a.rename_free(map), b.rename_free(map)),
            Formula::Or(a, b) => Formula::or(a.rename_free(map), b.rename_free(map)),
            Formula::ButNot(a, b) => Formula::but_not(a.rename_free(map), b.rename_free(map)),
            Formula::Nabla(a) => Formula::nabla(a.rename_free(map)),
            Formula::Exists(y, a) | Formula::Forall(y, a) => {
                let mut inner = map.clone();
                inner.remove(y);
                let body = Box::new(a.rename_free(&inner));
                match self {
                    Formula::Exists(..) => Formula::Exists(y.clone(), body),
                    _ => Formula::Forall(y.clone(), body),
                }
            }
        }
    }

    /// The value `‖φ‖(A, α)`, by structural recursion.
    pub fn eval_at(&self, a: &KStructure, alpha: &Assignment) -> Result<Value> {
        let k = a.semiring();
        let look = |v: &Var| {
            alpha
                .get(v)
                .ok_or_else(|| Error::UnboundVariable(v.clone()))
        };
        match self {
            Formula::Eq(x, y) => Ok(if look(x)? == look(y)? {
                k.one()
            } else {
                k.zero()
            }),
            Formula::Atom(name, args) => {
                let rel = a.relation(name)?;
                if rel.arity() != args.len() {
                    return Err(Error::ArityMismatch {
                        left: rel.arity(),
                        right: args.len(),
                    });
                }
                let t = args
                    .iter()
                    .map(|v| look(v).cloned())
                    .collect::<Result<Tuple>>()?;
                Ok(rel.get(&t))
            }
            Formula::And(p, q) => k.mul(&p.eval_at(a, alpha)?, &q.eval_at(a, alpha)?),
            Formula::Or(p, q) => k.add(&p.eval_at(a, alpha)?, &q.eval_at(a, alpha)?),
            Formula::ButNot(p, q) => k.monus(&p.eval_at(a, alpha)?, &q.eval_at(a, alpha)?),
            Formula::Nabla(p) => k.support(&p.eval_at(a, alpha)?),
            Formula::Exists(y, p) | Formula::Forall(y, p) => {
                let mut beta = alpha.clone();
                let mut acc = match self {
                    Formula::Exists(..) => k.zero(),
                    _ => k.one(),
                };
                for b in a.universe() {
                    beta.insert(y.clone(), b.clone());
                    let v = p.eval_at(a, &beta)?;
                    acc = match self {
                        Formula::Exists(..) => k.add(&acc, &v)?,
                        _ => k.mul(&acc, &v)?,
                    };
                }
                Ok(acc)
            }
        }
    }

    /// The relation `φ^A` with columns in free-variable order.
    ///
    /// Computed bottom-up over sparse tables keyed by assignments to each
    /// subformula's free variables, straight from the semantic clauses.
    pub fn relation_of(&self, a: &KStructure) -> Result<KRelation> {
        let table = self.table(a)?;
        KRelation::from_rows(a.semiring(), table.vars.len(), table.rows)
    }

    fn table(&self, a: &KStructure) -> Result<Table> {
        let k = a.semiring();
        match self {
            Formula::Eq(x, y) => {
                let vars = dedup(&[x.clone(), y.clone()]);
                let rows = a
                    .universe()
                    .iter()
                    .map(|e| (vec![e.clone(); vars.len()], k.one()))
                    .collect();
                Ok(Table { vars, rows })
            }
            Formula::Atom(name, args) => {
                let rel = a.relation(name)?;
                if rel.arity() != args.len() {
                    return Err(Error::ArityMismatch {
                        left: rel.arity(),
                        right: args.len(),
                    });
                }
                let vars = dedup(args);
                let mut rows = BTreeMap::new();
                'rows: for (t, v) in rel.rows() {
                    let mut key: Vec<Option<&Elem>> = vec![None; vars.len()];
                    for (arg, e) in args.iter().zip(t) {
                        let slot = &mut key[index_of(&vars, arg)];
                        match slot {
                            Some(prev) if *prev != e => continue 'rows,
                            _ => *slot = Some(e),
                        }
                    }
                    let key = key.into_iter().map(|e| e.cloned().unwrap()).collect();
                    rows.insert(key, v.clone());
                }
                Ok(Table { vars, rows })
            }
            Formula::And(p, q) => {
                let (tp, tq) = (p.table(a)?, q.table(a)?);
                let vars = merge_vars(&tp.vars, &tq.vars);
                let mut rows = BTreeMap::new();
                for (kp, vp) in &tp.rows {
                    'inner: for (kq, vq) in &tq.rows {
                        let mut key = kp.clone();
                        for (var, e) in tq.vars.iter().zip(kq) {
                            match tp.vars.iter().position(|w| w == var) {
                                Some(i) if kp[i] != *e => continue 'inner,
                                Some(_) => {}
                                None => key.push(e.clone()),
                            }
                        }
                        insert_nonzero(&mut rows, key, k.mul(vp, vq)?);
                    }
                }
                Ok(Table { vars, rows })
            }
            Formula::Or(p, q) | Formula::ButNot(p, q) => {
                let (tp, tq) = (p.table(a)?, q.table(a)?);
                let vars = merge_vars(&tp.vars, &tq.vars);
                let mut keys: BTreeSet<Tuple> = tp.extend_to(&vars, a.universe()).collect();
                if matches!(self, Formula::Or(..)) {
                    keys.extend(tq.extend_to(&vars, a.universe()));
                }
                let mut rows = BTreeMap::new();
                for key in keys {
                    let vp = tp.lookup(&vars, &key, k);
                    let vq = tq.lookup(&vars, &key, k);
                    let v = match self {
                        Formula::Or(..) => k.add(&vp, &vq)?,
                        _ => k.monus(&vp, &vq)?,
                    };
                    insert_nonzero(&mut rows, key, v);
                }
                Ok(Table { vars, rows })
            }
            Formula::Nabla(p) => {
                let tp = p.table(a)?;
                let one = k.one();
                Ok(Table {
                    vars: tp.vars,
                    rows: tp.rows.into_keys().map(|t| (t, one.clone())).collect(),
                })
            }
            Formula::Exists(y, p) | Formula::Forall(y, p) => {
                let tp = p.table(a)?;
                let Some(pos) = tp.vars.iter().position(|v| v == y) else {
                    return Err(Error::NotFree(y.clone()));
                };
                let mut vars = tp.vars.clone();
                vars.remove(pos);
                let mut groups: BTreeMap<Tuple, Vec<&Value>> = BTreeMap::new();
                for (t, v) in &tp.rows {
                    let mut key = t.clone();
                    key.remove(pos);
                    groups.entry(key).or_default().push(v);
                }
                let mut rows = BTreeMap::new();
                for (key, vals) in groups {
                    let v = match self {
                        Formula::Exists(..) => k.sum(vals)?,
                        // a missing factor is zero, and zero annihilates
                        _ if vals.len() < a.universe().len() => continue,
                        _ => k.product(vals)?,
                    };
                    insert_nonzero(&mut rows, key, v);
                }
                Ok(Table { vars, rows })
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cur = Cursor::new(text)?;
        let f = parse_formula(&mut cur)?;
        cur.finish()?;
        Ok(f)
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Formula::parse(s)
    }
}

/// Nonzero values keyed by assignments to `vars`, in that order.
struct Table {
    vars: Vec<Var>,
    rows: BTreeMap<Tuple, Value>,
}

impl Table {
    /// Keys over `want` (a superset of `self.vars`) that restrict to a stored row.
    fn extend_to<'a>(
        &'a self,
        want: &'a [Var],
        universe: &'a BTreeSet<Elem>,
    ) -> impl Iterator<Item = Tuple> + 'a {
        self.rows.keys().flat_map(move |t| {
            let mut partial: Vec<Tuple> = vec![Vec::with_capacity(want.len())];
            for var in want {
                partial = match self.vars.iter().position(|w| w == var) {
                    Some(i) => partial
                        .into_iter()
                        .map(|mut p| {
                            p.push(t[i].clone());
                            p
                        })
                        .collect(),
                    None => partial
                        .into_iter()
                        .flat_map(|p| {
                            universe.iter().map(move |e| {
                                let mut q = p.clone();
                                q.push(e.clone());
                                q
                            })
                        })
                        .collect(),
                };
            }
            partial
        })
    }

    fn lookup(&self, want: &[Var], key: &[Elem], k: Semiring) -> Value {
        let restricted: Tuple = self
            .vars
            .iter()
            .map(|v| key[index_of(want, v)].clone())
            .collect();
        self.rows
            .get(&restricted)
            .cloned()
            .unwrap_or_else(|| k.zero())
    }
}

fn insert_nonzero(rows: &mut BTreeMap<Tuple, Value>, key: Tuple, v: Value) {
    if !v.is_zero() {
        rows.insert(key, v);
    }
}

fn index_of(vars: &[Var], v: &str) -> usize {
    vars.iter().position(|w| w == v).expect("variable in list")
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

fn merge_vars(a: &[Var], b: &[Var]) -> Vec<Var> {
    let mut out = a.to_vec();
    out.extend(b.iter().filter(|v| !a.contains(v)).cloned());
    out
}

fn parse_formula(cur: &mut Cursor) -> Result<Formula> {
    let mut f = parse_conj(cur)?;
    loop {
        if cur.is_keyword("or") {
            cur.next();
            f = Formula::or(f, parse_conj(cur)?);
        } else if cur.is_keyword("butnot") {
            cur.next();
            f = Formula::but_not(f, parse_conj(cur)?);
        } else {
            return Ok(f);
        }
    }
}

fn parse_conj(cur: &mut Cursor) -> Result<Formula> {
    let mut f = parse_unary(cur)?;
    while cur.is_keyword("and") {
        cur.next();
        f = Formula::and(f, parse_unary(cur)?);
    }
    Ok(f)
}

fn parse_var(cur: &mut Cursor) -> Result<Var> {
    if let Some(Tok::Ident(s)) = cur.peek() {
        if KEYWORDS.contains(&s.as_str()) {
            return Err(cur.error(format!("`{s}` is a keyword, not a variable")));
        }
    }
    cur.ident("a variable")
}

fn parse_unary(cur: &mut Cursor) -> Result<Formula> {
    if cur.is_keyword("nabla") {
        cur.next();
        return Ok(Formula::nabla(parse_unary(cur)?));
    }
    for (kw, exists) in [("exists", true), ("forall", false)] {
        if cur.is_keyword(kw) {
            cur.next();
            let y = parse_var(cur)?;
            cur.expect(Tok::Dot, "`.` after the quantified variable")?;
            let body = Box::new(parse_formula(cur)?);
            return Ok(if exists {
                Formula::Exists(y, body)
            } else {
                Formula::Forall(y, body)
            });
        }
    }
    if cur.peek() == Some(&Tok::LParen) {
        cur.next();
        let f = parse_formula(cur)?;
        cur.expect(Tok::RParen, "`)`")?;
        return Ok(f);
    }
    let start = cur.pos();
    let name = parse_var(cur)?;
    match cur.next() {
        Some(Tok::LParen) => {
            let mut args = Vec::new();
            if cur.peek() != Some(&Tok::RParen) {
                args.push(parse_var(cur)?);
                while cur.peek() == Some(&Tok::Comma) {
                    cur.next();
                    args.push(parse_var(cur)?);
                }
            }
            cur.expect(Tok::RParen, "`)`")?;
            Ok(Formula::Atom(name, args))
        }
        Some(Tok::Eq) => Ok(Formula::Eq(name, parse_var(cur)?)),
        Some(Tok::Neq) => {
            let y = parse_var(cur)?;
            Ok(Formula::neq(&name, &y))
        }
        _ => Err(Error::syntax(
            start,
            format!("expected an atom, `=` or `!=` after `{name}`"),
        )),
    }
}

impl Formula {
    /// `(x = x) butnot (x = y)` is printed back as `x != y`.
    fn as_neq(&self) -> Option<(&Var, &Var)> {
        match self {
            Formula::ButNot(a, b) => match (a.as_ref(), b.as_ref()) {
                (Formula::Eq(x1, x2), Formula::Eq(x3, y)) if x1 == x2 && x2 == x3 => Some((x1, y)),
                _ => None,
            },
            _ => None,
        }
    }

    fn is_atomic(&self) -> bool {
        matches!(self, Formula::Eq(..) | Formula::Atom(..)) || self.as_neq().is_some()
    }

    fn is_disjunctive(&self) -> bool {
        matches!(self, Formula::Or(..) | Formula::ButNot(..)) && self.as_neq().is_none()
    }

    fn is_quantifier(&self) -> bool {
        matches!(self, Formula::Exists(..) | Formula::Forall(..))
    }
}

fn paren_if(f: &Formula, wrap: bool) -> String {
    if wrap {
        format!("({f})")
    } else {
        f.to_string()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((x, y)) = self.as_neq() {
            return write!(f, "{x} != {y}");
        }
        match self {
            Formula::Eq(x, y) => write!(f, "{x} = {y}"),
            Formula::Atom(n, args) => write!(f, "{n}({})", args.join(",")),
            Formula::Or(a, b) | Formula::ButNot(a, b) => {
                let op = if matches!(self, Formula::Or(..)) {
                    "or"
                } else {
                    "butnot"
                };
                let left = paren_if(a, a.is_quantifier());
                let right = paren_if(b, b.is_quantifier() || b.is_disjunctive());
                write!(f, "{left} {op} {right}")
            }
            Formula::And(a, b) => {
                let left = paren_if(a, a.is_quantifier() || a.is_disjunctive());
                let right = paren_if(
                    b,
                    b.is_quantifier() || b.is_disjunctive() || matches!(**b, Formula::And(..)),
                );
                write!(f, "{left} and {right}")
            }
            Formula::Nabla(a) => {
                let wrap = !(a.is_atomic() || matches!(**a, Formula::Nabla(_)));
                write!(f, "nabla {}", paren_if(a, wrap))
            }
            Formula::Exists(y, a) => write!(f, "exists {y}. {a}"),
            Formula::Forall(y, a) => write!(f, "forall {y}. {a}"),
        }
    }
}
