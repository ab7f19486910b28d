//! Seeded random generation and the property checkers built on it.
//!
//! Every generator is a pure function of its [`GenConfig`]: databases,
//! expressions and formulas draw from separate streams of a ChaCha generator
//! seeded with `cfg.seed`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::AlgebraExpr;
use crate::calculus::{Formula, Var};
use crate::error::{Error, Result};
use crate::relation::{
    format_tuple, Condition, Elem, KDatabase, KRelation, KStructure, Schema, Tuple,
};
use crate::semiring::{Level, Monomial, Polynomial, SecValue, Semiring, Value};
use crate::transpile::{algebra_to_calculus, calculus_to_algebra, Capability};

const DB_STREAM: u64 = 1;
const EXPR_STREAM: u64 = 2;
const FORMULA_STREAM: u64 = 3;

/// Knobs for the random generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_depth: usize,
    /// Upper bound on the arity of every generated subexpression.
    pub max_arity: usize,
    /// Number of domain elements a database may use.
    pub adom_size: usize,
    pub max_supp_rows: usize,
    pub semiring: Semiring,
    pub allow_div: bool,
    pub allow_forall: bool,
    pub allow_supp: bool,
}

impl GenConfig {
    pub fn new(semiring: Semiring, seed: u64) -> Self {
        GenConfig {
            seed,
            max_depth: 5,
            max_arity: 4,
            adom_size: 4,
            max_supp_rows: 6,
            semiring,
            allow_div: false,
            allow_forall: false,
            allow_supp: true,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GenConfig {
            seed,
            ..self.clone()
        }
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// The schema used when none is given: `R` binary, `S` unary.
pub fn default_schema() -> Schema {
    Schema::new([("R", 2), ("S", 1)]).expect("valid schema")
}

/// The `i`-th domain element: `a`, `b`, …, `z`, `e26`, `e27`, ….
pub fn element(i: usize) -> Elem {
    if i < 26 {
        Elem::new(&((b'a' + i as u8) as char).to_string())
    } else {
        Elem::new(&format!("e{i}"))
    }
}

/// A random nonzero value from a small range of the instance.
pub fn random_nonzero<R: Rng>(k: Semiring, rng: &mut R) -> Value {
    match k {
        Semiring::Boolean => Value::Bool(true),
        Semiring::Bag => Value::nat(rng.random_range(1..=9)),
        Semiring::Tropical => Value::trop(rng.random_range(0..=9)),
        Semiring::Fuzzy | Semiring::Lukasiewicz => {
            let q = rng.random_range(1..=8);
            Value::unit(rng.random_range(1..=q), q)
        }
        Semiring::Provenance => {
            let monos = [
                Monomial::default(),
                Monomial::var("x"),
                Monomial::var("y"),
                Monomial::new([("x".into(), 2)].into()),
                Monomial::new([("x".into(), 1), ("y".into(), 1)].into()),
                Monomial::new([("y".into(), 2)].into()),
            ];
            let mut p = Polynomial::zero();
            for _ in 0..rng.random_range(1..=3) {
                let m = monos.choose(rng).expect("nonempty").clone();
                p = p.add(&Polynomial::term(
                    BigUint::from(rng.random_range(1u32..=3)),
                    m,
                ));
            }
            Value::Poly(p)
        }
        Semiring::Security => Value::Sec(SecValue::Pair(
            BigUint::from(rng.random_range(1u32..=9)),
            *Level::ALL.choose(rng).expect("nonempty"),
        )),
        Semiring::Integer => {
            let n: i64 = rng.random_range(1..=5);
            Value::int(if rng.random_bool(0.5) { n } else { -n })
        }
    }
}

/// A random value that is zero with probability 1/5.
pub fn random_value<R: Rng>(k: Semiring, rng: &mut R) -> Value {
    if rng.random_ratio(1, 5) {
        k.zero()
    } else {
        match k {
            Semiring::Boolean => Value::Bool(rng.random_bool(0.5)),
            _ => random_nonzero(k, rng),
        }
    }
}

/// A random non-trivial database over `schema`.
pub fn gen_database(cfg: &GenConfig, schema: &Schema) -> KDatabase {
    let mut rng = cfg.rng(DB_STREAM);
    let k = cfg.semiring;
    let elems: Vec<Elem> = (0..cfg.adom_size.max(1)).map(element).collect();
    let mut db = KDatabase::new(k, schema.clone());
    let random_rel = |arity: usize, rows: usize, rng: &mut ChaCha8Rng| {
        let mut rel = KRelation::empty(k, arity);
        for _ in 0..rows {
            let t: Tuple = (0..arity)
                .map(|_| elems.choose(rng).expect("nonempty").clone())
                .collect();
            rel.set(t, random_nonzero(k, rng)).expect("well-formed row");
        }
        rel
    };
    for (name, arity) in schema.iter() {
        let rows = rng.random_range(0..=cfg.max_supp_rows);
        let rel = random_rel(arity, rows, &mut rng);
        db.set_relation(name, rel).expect("schema relation");
    }
    if !db.is_nontrivial() {
        let (name, arity) = schema.iter().next().expect("nonempty schema");
        let rel = random_rel(arity, 1, &mut rng);
        db.set_relation(name, rel).expect("schema relation");
    }
    db
}

struct ExprGen<'a> {
    cfg: &'a GenConfig,
    schema: &'a Schema,
    rng: ChaCha8Rng,
}

impl ExprGen<'_> {
    fn rel(&mut self) -> (AlgebraExpr, usize) {
        let names: Vec<(&str, usize)> = self
            .schema
            .iter()
            .filter(|(_, a)| *a <= self.cfg.max_arity)
            .collect();
        let (name, arity) = *names
            .choose(&mut self.rng)
            .expect("a relation within the arity bound");
        (AlgebraExpr::rel(name), arity)
    }

    fn any(&mut self, depth: usize) -> (AlgebraExpr, usize) {
        if depth <= 1 || self.rng.random_ratio(1, 6) {
            return self.rel();
        }
        for _ in 0..8 {
            if let Some(found) = self.compound(depth) {
                return found;
            }
        }
        self.rel()
    }

    fn compound(&mut self, depth: usize) -> Option<(AlgebraExpr, usize)> {
        let monus = self.cfg.semiring.descriptor().has_monus;
        let d = depth - 1;
        match self.rng.random_range(0..7) {
            0 => {
                let (a, n) = self.any(d);
                let b = self.of_arity(d, n)?;
                Some((AlgebraExpr::union(a, b), n))
            }
            1 if monus => {
                let (a, n) = self.any(d);
                let b = self.of_arity(d, n)?;
                Some((AlgebraExpr::diff(a, b), n))
            }
            2 => {
                let (a, n) = self.any(d);
                let (b, m) = self.any(d);
                (n + m <= self.cfg.max_arity).then(|| (AlgebraExpr::product(a, b), n + m))
            }
            3 => {
                let (a, n) = self.any(d);
                let keep = self.rng.random_range(0..=n);
                let mut cols: Vec<usize> = (1..=n).collect();
                cols.shuffle(&mut self.rng);
                cols.truncate(keep);
                Some((AlgebraExpr::project(cols, a), keep))
            }
            4 => {
                let (a, n) = self.any(d);
                if n == 0 {
                    return None;
                }
                let cond = self.condition(n, 2, monus);
                Some((AlgebraExpr::select(cond, a), n))
            }
            5 if self.cfg.allow_supp => {
                let (a, n) = self.any(d);
                Some((AlgebraExpr::supp(a), n))
            }
            6 if self.cfg.allow_div => {
                let (b, m) = self.any(d);
                if m >= self.cfg.max_arity {
                    return None;
                }
                let n = self.rng.random_range(m + 1..=self.cfg.max_arity);
                let a = self.of_arity(d, n)?;
                Some((AlgebraExpr::div(a, b), n - m))
            }
            _ => None,
        }
    }

    fn condition(&mut self, n: usize, depth: usize, allow_neq: bool) -> Condition {
        if depth > 1 && self.rng.random_ratio(1, 3) {
            let a = self.condition(n, depth - 1, allow_neq);
            let b = self.condition(n, depth - 1, allow_neq);
            return if self.rng.random_bool(0.5) {
                Condition::and(a, b)
            } else {
                Condition::or(a, b)
            };
        }
        let i = self.rng.random_range(1..=n);
        let j = self.rng.random_range(1..=n);
        if allow_neq && self.rng.random_bool(0.4) {
            Condition::Neq(i, j)
        } else {
            Condition::Eq(i, j)
        }
    }

    /// An expression of exactly arity `n`, by rejection and then by
    /// projecting a large enough product of relations.
    fn of_arity(&mut self, depth: usize, n: usize) -> Option<AlgebraExpr> {
        for _ in 0..12 {
            let (e, m) = self.any(depth);
            if m == n {
                return Some(e);
            }
        }
        if depth < 2 {
            return None;
        }
        let (mut e, mut m) = self.rel();
        let mut used = 1;
        while m < n && used + 1 < depth {
            let (r, a) = self.rel();
            e = AlgebraExpr::product(e, r);
            m += a;
            used += 1;
        }
        if m < n || m > self.cfg.max_arity {
            return None;
        }
        let mut cols: Vec<usize> = (1..=m).collect();
        cols.shuffle(&mut self.rng);
        cols.truncate(n);
        Some(AlgebraExpr::project(cols, e))
    }
}

/// A random well-formed expression of depth at most `cfg.max_depth`.
pub fn gen_algebra_expr(cfg: &GenConfig, schema: &Schema) -> AlgebraExpr {
    let mut g = ExprGen {
        cfg,
        schema,
        rng: cfg.rng(EXPR_STREAM),
    };
    g.any(cfg.max_depth.max(1)).0
}

const VAR_POOL: [&str; 4] = ["y1", "y2", "y3", "y4"];

struct FormulaGen<'a> {
    cfg: &'a GenConfig,
    schema: &'a Schema,
    rng: ChaCha8Rng,
}

impl FormulaGen<'_> {
    fn var(&mut self) -> &'static str {
        VAR_POOL.choose(&mut self.rng).expect("nonempty")
    }

    fn atomic(&mut self) -> Formula {
        if self.rng.random_ratio(1, 4) {
            let x = self.var();
            let y = if self.rng.random_ratio(1, 4) {
                x
            } else {
                self.var()
            };
            return Formula::eq(x, y);
        }
        let rels: Vec<(&str, usize)> = self.schema.iter().collect();
        let (name, arity) = *rels.choose(&mut self.rng).expect("nonempty schema");
        // a small pool makes repeated variables common
        let args: Vec<&str> = (0..arity).map(|_| self.var()).collect();
        Formula::atom(name, &args)
    }

    fn any(&mut self, depth: usize) -> Formula {
        if depth <= 1 || self.rng.random_ratio(1, 6) {
            return self.atomic();
        }
        let monus = self.cfg.semiring.descriptor().has_monus;
        let d = depth - 1;
        loop {
            match self.rng.random_range(0..7) {
                0 => return Formula::and(self.any(d), self.any(d)),
                1 => return Formula::or(self.any(d), self.any(d)),
                2 if monus => return Formula::but_not(self.any(d), self.any(d)),
                3 => return Formula::nabla(self.any(d)),
                4 | 5 => {
                    let body = self.any(d);
                    return self.quantify(body, false);
                }
                6 if self.cfg.allow_forall => {
                    let body = self.any(d);
                    return self.quantify(body, true);
                }
                _ => {}
            }
        }
    }

    fn quantify(&mut self, body: Formula, universal: bool) -> Formula {
        let fv = body
            .free_vars()
            .expect("generated formulas are well-formed");
        match fv.choose(&mut self.rng) {
            Some(y) if universal => Formula::forall(y, body),
            Some(y) => Formula::exists(y, body),
            None => body,
        }
    }
}

/// A random well-formed formula over the variables `y1`–`y4`. About one in
/// four deeper ones is closed into a sentence.
pub fn gen_formula(cfg: &GenConfig, schema: &Schema) -> Formula {
    let mut g = FormulaGen {
        cfg,
        schema,
        rng: cfg.rng(FORMULA_STREAM),
    };
    let mut f = g.any(cfg.max_depth.max(1));
    if cfg.max_depth > 1 && g.rng.random_ratio(1, 4) {
        let universal = cfg.allow_forall && g.rng.random_bool(0.5);
        for y in f.free_vars().expect("well-formed") {
            f = if universal {
                Formula::forall(&y, f)
            } else {
                Formula::exists(&y, f)
            };
        }
    }
    f
}

/// The first tuple where two relations disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub tuple: Tuple,
    pub left: Value,
    pub right: Value,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at {}: {} vs {}",
            format_tuple(&self.tuple),
            self.left,
            self.right
        )
    }
}

fn first_difference(left: &KRelation, right: &KRelation) -> Option<Mismatch> {
    let keys: BTreeSet<&Tuple> = left
        .support_tuples()
        .chain(right.support_tuples())
        .collect();
    keys.into_iter().find_map(|t| {
        let (l, r) = (left.get(t), right.get(t));
        (l != r).then(|| Mismatch {
            tuple: t.clone(),
            left: l,
            right: r,
        })
    })
}

/// Compares `e` on `db` with `phi` on `A(db)`, column `i` of `e` matching the
/// variable `witness[i]`. `None` means exact equality.
pub fn check_equivalence(
    e: &AlgebraExpr,
    phi: &Formula,
    witness: &[Var],
    requires: Capability,
    db: &KDatabase,
) -> Result<Option<Mismatch>> {
    requires.check(db.semiring())?;
    let fv = phi.free_vars()?;
    let perm: Vec<usize> = witness
        .iter()
        .map(|w| fv.iter().position(|v| v == w))
        .collect::<Option<_>>()
        .filter(|p: &Vec<usize>| p.len() == fv.len())
        .ok_or_else(|| Error::NotSubset {
            have: witness.to_vec(),
            want: fv.clone(),
        })?;
    let lhs = e.eval(db)?;
    let structure = KStructure::from_database(db)?;
    let rhs = phi.relation_of(&structure)?;
    let rhs = KRelation::from_rows(
        db.semiring(),
        perm.len(),
        rhs.rows()
            .map(|(t, v)| (perm.iter().map(|&i| t[i].clone()).collect(), v.clone())),
    )?;
    Ok(first_difference(&lhs, &rhs))
}

/// `extra` elements named by the first letters absent from the active domain.
pub fn fresh_elements(adom: &BTreeSet<Elem>, extra: usize) -> Vec<Elem> {
    (0..)
        .map(element)
        .filter(|e| !adom.contains(e))
        .take(extra)
        .collect()
}

/// Compares `phi` over `A(db)` with `phi` over the active domain enlarged by
/// `extra` fresh elements.
pub fn check_domain_independence(
    phi: &Formula,
    db: &KDatabase,
    extra: usize,
) -> Result<Option<Mismatch>> {
    let adom = db.active_domain();
    let small = KStructure::from_database(db)?;
    let mut universe = adom.clone();
    universe.extend(fresh_elements(&adom, extra));
    let large = KStructure::with_universe(db, universe)?;
    Ok(first_difference(
        &phi.relation_of(&small)?,
        &phi.relation_of(&large)?,
    ))
}

/// One JSON-lines record of a property check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub property: String,
    pub seed: u64,
    pub semiring: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl Verdict {
    pub fn new(property: &str, seed: u64, k: Semiring, failure: Option<String>) -> Self {
        Verdict {
            property: property.to_string(),
            seed,
            semiring: k.name().to_string(),
            pass: failure.is_none(),
            counterexample: failure,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("verdicts serialize")
    }
}

/// Translates a random expression to calculus and checks equivalence and
/// domain independence with one and two fresh elements.
pub fn a2c_trial(cfg: &GenConfig, schema: &Schema) -> Result<Vec<Verdict>> {
    let db = gen_database(cfg, schema);
    let e = gen_algebra_expr(cfg, schema);
    let t = algebra_to_calculus(&e, schema)?;
    let k = cfg.semiring;
    let detail = |m: Mismatch| format!("E = {e}; phi = {}; {m}", t.output);
    let mut out = vec![Verdict::new(
        "a2c-equivalence",
        cfg.seed,
        k,
        check_equivalence(&e, &t.output, &t.witness, t.requires, &db)?.map(detail),
    )];
    for extra in [1, 2] {
        out.push(Verdict::new(
            &format!("a2c-domain-independence-{extra}"),
            cfg.seed,
            k,
            check_domain_independence(&t.output, &db, extra)?.map(detail),
        ));
    }
    Ok(out)
}

/// Translates a random formula to algebra and checks equivalence; the
/// algebra output is mapped back to calculus to check domain independence.
pub fn c2a_trial(cfg: &GenConfig, schema: &Schema) -> Result<Vec<Verdict>> {
    let db = gen_database(cfg, schema);
    let phi = gen_formula(cfg, schema);
    let t = calculus_to_algebra(&phi, schema)?;
    let k = cfg.semiring;
    let detail = |m: Mismatch| format!("phi = {phi}; E = {}; {m}", t.output);
    let mut out = vec![Verdict::new(
        "c2a-equivalence",
        cfg.seed,
        k,
        check_equivalence(&t.output, &phi, &t.witness, t.requires, &db)?.map(detail),
    )];
    let back = algebra_to_calculus(&t.output, schema)?;
    for extra in [1, 2] {
        out.push(Verdict::new(
            &format!("c2a-domain-independence-{extra}"),
            cfg.seed,
            k,
            check_domain_independence(&back.output, &db, extra)?
                .map(|m| format!("phi = {phi}; E = {}; back = {}; {m}", t.output, back.output)),
        ));
    }
    Ok(out)
}

/// Outcome of an axiom suite: how many instances were checked and the
/// first few failures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub semiring: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

const MAX_REPORTED: usize = 10;

fn triples(k: Semiring, samples: usize, seed: u64) -> Vec<[Value; 3]> {
    if k == Semiring::Boolean {
        let vals = [Value::Bool(false), Value::Bool(true)];
        let mut out = Vec::new();
        for a in &vals {
            for b in &vals {
                for c in &vals {
                    out.push([a.clone(), b.clone(), c.clone()]);
                }
            }
        }
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let a = random_value(k, &mut rng);
            // equal operands exercise the boundary cases of each closed form
            let b = if rng.random_ratio(1, 8) {
                a.clone()
            } else {
                random_value(k, &mut rng)
            };
            let c = random_value(k, &mut rng);
            [a, b, c]
        })
        .collect()
}

fn run_suite(
    k: Semiring,
    samples: usize,
    seed: u64,
    check: impl Fn(&Value, &Value, &Value) -> Result<Vec<&'static str>>,
) -> Result<AxiomReport> {
    let ts = triples(k, samples, seed);
    let mut failures = Vec::new();
    for [a, b, c] in &ts {
        for law in check(a, b, c)? {
            if failures.len() < MAX_REPORTED {
                failures.push(format!("{law} fails for a={a}, b={b}, c={c}"));
            }
        }
    }
    Ok(AxiomReport {
        semiring: k.name().to_string(),
        checked: ts.len(),
        failures,
    })
}

/// The four monus identities and the Galois property on random triples;
/// exhaustive for the Boolean instance.
pub fn monus_axiom_suite(k: Semiring, samples: usize, seed: u64) -> Result<AxiomReport> {
    if !k.descriptor().has_monus {
        return Err(Error::MonusUnsupported(k.name()));
    }
    run_suite(k, samples, seed, |a, b, c| {
        let m = |x: &Value, y: &Value| k.monus(x, y);
        let add = |x: &Value, y: &Value| k.add(x, y);
        let zero = k.zero();
        let mut bad = Vec::new();
        if !m(a, a)?.is_zero() {
            bad.push("a - a = 0");
        }
        if !m(&zero, a)?.is_zero() {
            bad.push("0 - a = 0");
        }
        if add(a, &m(b, a)?)? != add(b, &m(a, b)?)? {
            bad.push("a + (b - a) = b + (a - b)");
        }
        if m(a, &add(b, c)?)? != m(&m(a, b)?, c)? {
            bad.push("a - (b + c) = (a - b) - c");
        }
        if k.nat_leq(&m(a, b)?, c)? != k.nat_leq(a, &add(b, c)?)? {
            bad.push("a - b <= c iff a <= b + c");
        }
        Ok(bad)
    })
}

/// Commutative-semiring axioms, zero-sum freedom and absence of zero
/// divisors (where the descriptor claims them), and support values.
pub fn semiring_axiom_suite(k: Semiring, samples: usize, seed: u64) -> Result<AxiomReport> {
    let d = k.descriptor();
    run_suite(k, samples, seed, |a, b, c| {
        let add = |x: &Value, y: &Value| k.add(x, y);
        let mul = |x: &Value, y: &Value| k.mul(x, y);
        let (zero, one) = (k.zero(), k.one());
        let mut bad = Vec::new();
        let laws: [(&'static str, bool); 9] = [
            ("a + b = b + a", add(a, b)? == add(b, a)?),
            (
                "(a + b) + c = a + (b + c)",
                add(&add(a, b)?, c)? == add(a, &add(b, c)?)?,
            ),
            ("a + 0 = a", add(a, &zero)? == *a),
            ("a * b = b * a", mul(a, b)? == mul(b, a)?),
            (
                "(a * b) * c = a * (b * c)",
                mul(&mul(a, b)?, c)? == mul(a, &mul(b, c)?)?,
            ),
            ("a * 1 = a", mul(a, &one)? == *a),
            (
                "a * (b + c) = a * b + a * c",
                mul(a, &add(b, c)?)? == add(&mul(a, b)?, &mul(a, c)?)?,
            ),
            ("a * 0 = 0", mul(a, &zero)?.is_zero()),
            ("s(a) in {0, 1}", {
                let s = k.support(a)?;
                s == zero || s == one
            }),
        ];
        bad.extend(laws.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name));
        if d.zero_sum_free && add(a, b)?.is_zero() && !(a.is_zero() && b.is_zero()) {
            bad.push("a + b = 0 implies a = b = 0");
        }
        if d.no_zero_divisors && mul(a, b)?.is_zero() && !(a.is_zero() || b.is_zero()) {
            bad.push("a * b = 0 implies a = 0 or b = 0");
        }
        Ok(bad)
    })
}

/// Counts verdict failures per property, for summaries.
pub fn tally(verdicts: &[Verdict]) -> BTreeMap<String, (usize, usize)> {
    let mut out: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for v in verdicts {
        let entry = out.entry(v.property.clone()).or_default();
        entry.0 += 1;
        if !v.pass {
            entry.1 += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::tuple;

    #[test]
    fn generators_are_deterministic() {
        let cfg = GenConfig::new(Semiring::Bag, 7);
        let s = default_schema();
        assert_eq!(gen_database(&cfg, &s), gen_database(&cfg, &s));
        assert_eq!(gen_algebra_expr(&cfg, &s), gen_algebra_expr(&cfg, &s));
        assert_eq!(gen_formula(&cfg, &s), gen_formula(&cfg, &s));
    }

    #[test]
    fn generated_databases_are_nontrivial() {
        let s = default_schema();
        for seed in 0..200 {
            let mut cfg = GenConfig::new(Semiring::Fuzzy, seed);
            cfg.max_supp_rows = 1;
            let db = gen_database(&cfg, &s);
            assert!(db.is_nontrivial());
            cfg.adom_size = 1;
            assert!(gen_database(&cfg, &s).active_domain().len() <= 1);
        }
    }

    #[test]
    fn generated_expressions_respect_flags() {
        let s = default_schema();
        for seed in 0..300 {
            let mut cfg = GenConfig::new(Semiring::Security, seed);
            let e = gen_algebra_expr(&cfg, &s);
            assert!(e.arity(&s).unwrap() <= cfg.max_arity);
            assert!(e.depth() <= cfg.max_depth);
            assert!(!e.contains_div() && !e.contains_diff());
            cfg.max_depth = 1;
            assert!(matches!(gen_algebra_expr(&cfg, &s), AlgebraExpr::Rel(_)));
            assert!(matches!(
                gen_formula(&cfg, &s),
                Formula::Atom(..) | Formula::Eq(..)
            ));
            let f = gen_formula(&GenConfig::new(Semiring::Security, seed), &s);
            f.check(&s).unwrap();
            assert!(!f.contains_forall() && !f.contains_but_not());
        }
    }

    #[test]
    fn equivalence_detects_corruption() {
        let s = default_schema();
        let mut db = KDatabase::new(Semiring::Bag, s.clone());
        db.set_relation(
            "R",
            KRelation::from_rows(Semiring::Bag, 2, [(tuple(&["a", "b"]), Value::nat(2))]).unwrap(),
        )
        .unwrap();
        let e = AlgebraExpr::rel("R");
        let w = vec!["x1".to_string(), "x2".to_string()];
        let ok = Formula::atom("R", &["x1", "x2"]);
        assert_eq!(
            check_equivalence(&e, &ok, &w, Capability::ZeroSumFree, &db).unwrap(),
            None
        );
        let bad = Formula::nabla(ok);
        let m = check_equivalence(&e, &bad, &w, Capability::ZeroSumFree, &db)
            .unwrap()
            .unwrap();
        assert_eq!(m.tuple, tuple(&["a", "b"]));
        assert_eq!((m.left, m.right), (Value::nat(2), Value::nat(1)));
        let swapped = vec!["x2".to_string(), "x1".to_string()];
        assert!(check_equivalence(
            &e,
            &Formula::atom("R", &["x1", "x2"]),
            &swapped,
            Capability::ZeroSumFree,
            &db
        )
        .unwrap()
        .is_some());
    }

    #[test]
    fn capability_is_enforced() {
        let s = default_schema();
        let db = KDatabase::new(Semiring::Integer, s);
        let e = AlgebraExpr::rel("S");
        let f = Formula::atom("S", &["x1"]);
        assert!(matches!(
            check_equivalence(&e, &f, &["x1".into()], Capability::ZeroSumFree, &db),
            Err(Error::Capability { .. })
        ));
    }

    #[test]
    fn fresh_elements_skip_the_active_domain() {
        let adom: BTreeSet<Elem> = [Elem::new("a"), Elem::new("c")].into();
        assert_eq!(
            fresh_elements(&adom, 2),
            vec![Elem::new("b"), Elem::new("d")]
        );
    }

    #[test]
    fn boolean_suite_is_exhaustive() {
        let r = monus_axiom_suite(Semiring::Boolean, 0, 0).unwrap();
        assert_eq!(r.checked, 8);
        assert!(r.passed());
    }

    #[test]
    fn axiom_suites_pass_on_small_samples() {
        for k in Semiring::ALL {
            assert!(semiring_axiom_suite(k, 300, 1).unwrap().passed(), "{k}");
            if k.descriptor().has_monus {
                assert!(monus_axiom_suite(k, 300, 1).unwrap().passed(), "{k}");
            }
        }
    }

    #[test]
    fn verdict_json_line() {
        let v = Verdict::new("p", 3, Semiring::Bag, None);
        assert_eq!(
            v.to_json_line(),
            r#"{"property":"p","seed":3,"semiring":"bag","pass":true}"#
        );
    }
}
