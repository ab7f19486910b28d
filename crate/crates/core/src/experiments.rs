//! Reproductions of the separation results and counterexamples.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::algebra::AlgebraExpr;
use crate::error::Result;
use crate::harness::{gen_algebra_expr, GenConfig};
use crate::relation::{format_tuple, tuple, Elem, KDatabase, KRelation, Schema, Tuple};
use crate::semiring::{Level, SecValue, Semiring, Value};
use crate::transpile::adom_expr;

/// Common surface of the experiment reports.
pub trait Report: Serialize {
    fn passed(&self) -> bool;
    fn table(&self) -> String;

    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("reports serialize")
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// The bag database `I(n)`: `R(a, b_i) = 2` and `S(b_i) = 1` for `i = 1..n`.
pub fn witness_database(n: usize) -> KDatabase {
    let schema = Schema::new([("R", 2), ("S", 1)]).expect("valid schema");
    let mut db = KDatabase::new(Semiring::Bag, schema);
    let bs: Vec<String> = (1..=n).map(|i| format!("b{i}")).collect();
    let r = KRelation::from_rows(
        Semiring::Bag,
        2,
        bs.iter().map(|b| (tuple(&["a", b]), Value::nat(2))),
    )
    .expect("well-formed");
    let s = KRelation::from_rows(
        Semiring::Bag,
        1,
        bs.iter().map(|b| (tuple(&[b]), Value::nat(1))),
    )
    .expect("well-formed");
    db.set_relation("R", r).expect("schema relation");
    db.set_relation("S", s).expect("schema relation");
    db
}

#[derive(Debug, Clone, Serialize)]
pub struct DivisionWitness {
    pub n: usize,
    pub value: String,
    pub expected: String,
}

impl Report for DivisionWitness {
    fn passed(&self) -> bool {
        self.value == self.expected
    }

    fn table(&self) -> String {
        format!("2^{} = {} {}", self.n, self.value, verdict(self.passed()))
    }
}

/// `(R ÷ S)(a)` on `I(n)`.
pub fn bag_division_witness(n: usize) -> Result<Value> {
    let db = witness_database(n);
    let out = AlgebraExpr::div(AlgebraExpr::rel("R"), AlgebraExpr::rel("S")).eval(&db)?;
    Ok(out.get(&tuple(&["a"])))
}

pub fn bag_division_report(n: usize) -> Result<DivisionWitness> {
    Ok(DivisionWitness {
        n,
        value: bag_division_witness(n)?.to_string(),
        expected: BigUint::from(2u32).pow(n).to_string(),
    })
}

/// `l(E)`: atoms count 1, every operator adds 1.
pub fn length(e: &AlgebraExpr) -> usize {
    match e {
        AlgebraExpr::Rel(_) => 1,
        AlgebraExpr::Union(a, b)
        | AlgebraExpr::Diff(a, b)
        | AlgebraExpr::Product(a, b)
        | AlgebraExpr::Div(a, b) => length(a) + length(b) + 1,
        AlgebraExpr::Project(_, a) | AlgebraExpr::Select(_, a) | AlgebraExpr::Supp(a) => {
            length(a) + 1
        }
    }
}

/// The polynomial `p_E` evaluated at `n`.
///
/// Atoms, products and projections follow the counting argument directly
/// (`π_v F` sums at most `n^{l(F)}` rows of `F`). The remaining cases follow
/// the same pattern: a union adds two multiplicities, so `p₁ + p₂` suffices
/// since `2^{l₁}, 2^{l₂} ≤ 2^{l₁+l₂+1}`; difference and selection never
/// raise a multiplicity, so they inherit; support caps it at 1.
pub fn bound_poly(e: &AlgebraExpr, n: usize) -> BigUint {
    let n_big = BigUint::from(n);
    match e {
        AlgebraExpr::Rel(_) | AlgebraExpr::Supp(_) => BigUint::one(),
        AlgebraExpr::Product(a, b) => bound_poly(a, n) * bound_poly(b, n),
        AlgebraExpr::Project(_, a) => n_big.pow(length(a)) * bound_poly(a, n),
        AlgebraExpr::Union(a, b) => bound_poly(a, n) + bound_poly(b, n),
        AlgebraExpr::Diff(a, _) | AlgebraExpr::Select(_, a) => bound_poly(a, n),
        AlgebraExpr::Div(..) => panic!("bound_poly is only defined for division-free expressions"),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExprMetrics {
    pub expr: String,
    pub length: usize,
    pub supp_size: usize,
    pub highest_mult: String,
    pub bound_poly: String,
    pub supp_ok: bool,
    pub mult_ok: bool,
}

pub fn expr_metrics(e: &AlgebraExpr, n: usize, db: &KDatabase) -> Result<ExprMetrics> {
    let out = e.eval(db)?;
    let l = length(e);
    let hm = out
        .rows()
        .map(|(_, v)| match v {
            Value::Nat(x) => x.clone(),
            _ => unreachable!("bag relation"),
        })
        .max()
        .unwrap_or_else(BigUint::zero);
    let p = bound_poly(e, n);
    let two = BigUint::from(2u32);
    Ok(ExprMetrics {
        expr: e.to_string(),
        length: l,
        supp_size: out.len(),
        supp_ok: BigUint::from(out.len()) <= BigUint::from(n).pow(l),
        mult_ok: hm <= &p * two.pow(l),
        highest_mult: hm.to_string(),
        bound_poly: p.to_string(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub violations: usize,
    pub metrics: Vec<ExprMetrics>,
}

impl Report for BoundsReport {
    fn passed(&self) -> bool {
        self.violations == 0
    }

    fn table(&self) -> String {
        let mut s = format!(
            "n = {}, {} expressions, {} violations {}\n",
            self.n,
            self.samples,
            self.violations,
            verdict(self.passed())
        );
        let _ = writeln!(
            s,
            "{:>4} {:>8} {:>12} {:>14}  expression",
            "l", "|supp|", "hm", "p_E(n)"
        );
        let failing: Vec<&ExprMetrics> = self
            .metrics
            .iter()
            .filter(|m| !(m.supp_ok && m.mult_ok))
            .collect();
        let shown = if failing.is_empty() {
            self.metrics.iter().collect()
        } else {
            failing
        };
        for m in shown.into_iter().take(10) {
            let _ = writeln!(
                s,
                "{:>4} {:>8} {:>12} {:>14}  {}",
                m.length, m.supp_size, m.highest_mult, m.bound_poly, m.expr
            );
        }
        s
    }
}

/// Samples division-free expressions over `(R:2, S:1)` and checks both
/// counting bounds on `I(n)`.
pub fn expression_bounds(n: usize, samples: usize, seed: u64) -> Result<BoundsReport> {
    let db = witness_database(n);
    let schema = db.schema().clone();
    let mut cfg = GenConfig::new(Semiring::Bag, seed);
    cfg.max_depth = 4;
    let mut metrics = Vec::with_capacity(samples);
    for i in 0..samples as u64 {
        let e = gen_algebra_expr(&cfg.with_seed(seed.wrapping_add(i)), &schema);
        metrics.push(expr_metrics(&e, n, &db)?);
    }
    Ok(BoundsReport {
        n,
        samples,
        seed,
        violations: metrics.iter().filter(|m| !(m.supp_ok && m.mult_ok)).count(),
        metrics,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SecurityReport {
    pub enumerated: usize,
    pub candidates: usize,
    pub minimal: Vec<String>,
    pub pairwise_incomparable: bool,
    pub has_minimum: bool,
    pub contains_x41: bool,
}

impl Report for SecurityReport {
    fn passed(&self) -> bool {
        self.minimal.len() == 5
            && self.pairwise_incomparable
            && !self.has_minimum
            && !self.contains_x41
    }

    fn table(&self) -> String {
        format!(
            "P = {{c : (43,I) <= (1,I) + c}}: {} of {} enumerated pairs\n\
             minimal elements: {}\n\
             pairwise incomparable: {}, minimum exists: {}, (41,s) in P: {} {}",
            self.candidates,
            self.enumerated,
            self.minimal.join(" "),
            self.pairwise_incomparable,
            self.has_minimum,
            self.contains_x41,
            verdict(self.passed())
        )
    }
}

/// Enumerates `P = {(x,s) : (43,I) ⪯ (1,I) + (x,s)}` for `x ≤ 60` and
/// extracts its minimal layer. A monus `(43,I) ∸ (1,I)` would be a minimum.
pub fn security_no_monus() -> Result<SecurityReport> {
    let k = Semiring::Security;
    let target = Value::sec(43, Level::I);
    let offset = Value::sec(1, Level::I);
    let mut enumerated = 0;
    let mut p = Vec::new();
    for x in 1..=60u64 {
        for level in Level::ALL {
            enumerated += 1;
            let c = Value::sec(x, level);
            if k.nat_leq(&target, &k.add(&offset, &c)?)? {
                p.push(c);
            }
        }
    }
    let leq = |a: &Value, b: &Value| k.nat_leq(a, b).expect("decidable order");
    let minimal: Vec<&Value> = p
        .iter()
        .filter(|c| !p.iter().any(|d| d != *c && leq(d, c)))
        .collect();
    let pairwise_incomparable = minimal
        .iter()
        .all(|a| minimal.iter().all(|b| a == b || (!leq(a, b) && !leq(b, a))));
    let has_minimum = p.iter().any(|m| p.iter().all(|c| leq(m, c)));
    let contains_x41 = p
        .iter()
        .any(|c| matches!(c, Value::Sec(SecValue::Pair(x, _)) if *x == BigUint::from(41u32)));
    Ok(SecurityReport {
        enumerated,
        candidates: p.len(),
        minimal: minimal.iter().map(|v| v.to_string()).collect(),
        pairwise_incomparable,
        has_minimum,
        contains_x41,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SupportReport {
    pub semiring: String,
    pub samples: usize,
    pub seed: u64,
    pub with_division: usize,
    pub violations: usize,
    pub counterexamples: Vec<String>,
}

impl Report for SupportReport {
    fn passed(&self) -> bool {
        self.violations == 0
    }

    fn table(&self) -> String {
        let mut s = format!(
            "{}: {} support-free expressions ({} with division), {} violations {}",
            self.semiring,
            self.samples,
            self.with_division,
            self.violations,
            verdict(self.passed())
        );
        for c in &self.counterexamples {
            let _ = write!(s, "\n  {c}");
        }
        s
    }
}

fn single_element_db(k: Semiring, v: Value) -> KDatabase {
    let mut db = KDatabase::new(k, Schema::new([("R", 1)]).expect("valid schema"));
    db.set_relation(
        "R",
        KRelation::from_rows(k, 1, [(tuple(&["a"]), v)]).expect("well-formed"),
    )
    .expect("schema relation");
    db
}

fn support_experiment(
    k: Semiring,
    witness: Value,
    allow_div: bool,
    samples: usize,
    seed: u64,
    violates: impl Fn(&Tuple, &Value) -> bool,
) -> Result<SupportReport> {
    let db = single_element_db(k, witness);
    let mut cfg = GenConfig::new(k, seed);
    cfg.allow_supp = false;
    cfg.allow_div = allow_div;
    let mut violations = 0;
    let mut with_division = 0;
    let mut counterexamples = Vec::new();
    for i in 0..samples as u64 {
        let e = gen_algebra_expr(&cfg.with_seed(seed.wrapping_add(i)), db.schema());
        with_division += usize::from(e.contains_div());
        let out = e.eval(&db)?;
        let bad = out
            .rows()
            .find(|(t, v)| violates(t, v))
            .map(|(t, v)| format!("{e} has {}↦{v}", format_tuple(t)));
        if let Some(c) = bad {
            violations += 1;
            if counterexamples.len() < 5 {
                counterexamples.push(c);
            }
        }
    }
    Ok(SupportReport {
        semiring: k.name().to_string(),
        samples,
        seed,
        with_division,
        violations,
        counterexamples,
    })
}

/// Over the fuzzy database `R(a) = 1/2`, support-free expressions without
/// division only produce values in `(0, 1/2]` on constant tuples, so none
/// of them defines `supp(R)`.
pub fn fuzzy_support_witness(samples: usize, seed: u64) -> Result<SupportReport> {
    let half = Value::unit(1, 2);
    let a = Elem::new("a");
    support_experiment(
        Semiring::Fuzzy,
        half.clone(),
        false,
        samples,
        seed,
        move |t, v| t.iter().any(|e| *e != a) || *v > half,
    )
}

/// Over the bag database `R(a) = 2`, checks that support-free expressions
/// with division only produce even multiplicities.
pub fn bag_support_even(samples: usize, seed: u64) -> Result<SupportReport> {
    let a = Elem::new("a");
    support_experiment(
        Semiring::Bag,
        Value::nat(2),
        true,
        samples,
        seed,
        move |t, v| {
            let odd = match v {
                Value::Nat(x) => x.bit(0),
                _ => unreachable!("bag relation"),
            };
            t.iter().any(|e| *e != a) || odd
        },
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct AdomFailureReport {
    pub adom_expr: String,
    pub evaluated: Vec<String>,
    pub active_domain: Vec<String>,
}

impl Report for AdomFailureReport {
    fn passed(&self) -> bool {
        self.evaluated.is_empty() && self.active_domain == ["a", "b"]
    }

    fn table(&self) -> String {
        format!(
            "E_adom = {}\nE_adom^I = {{{}}}\nadom(I) = {{{}}} {}",
            self.adom_expr,
            self.evaluated.join(", "),
            self.active_domain.join(", "),
            verdict(self.passed())
        )
    }
}

/// Over ℤ with `R(a,b) = 1` and `R(b,a) = -1` the active-domain expression
/// cancels to the empty relation.
pub fn adom_failure_nonzsf() -> Result<AdomFailureReport> {
    let k = Semiring::Integer;
    let schema = Schema::new([("R", 2)])?;
    let mut db = KDatabase::new(k, schema.clone());
    db.set_relation(
        "R",
        KRelation::from_rows(
            k,
            2,
            [
                (tuple(&["a", "b"]), Value::int(1)),
                (tuple(&["b", "a"]), Value::int(-1)),
            ],
        )?,
    )?;
    let e = adom_expr(&schema)?;
    let out = e.eval(&db)?;
    let adom: BTreeSet<Elem> = db.active_domain();
    Ok(AdomFailureReport {
        adom_expr: e.to_string(),
        evaluated: out
            .rows()
            .map(|(t, v)| format!("{}↦{v}", format_tuple(t)))
            .collect(),
        active_domain: adom.iter().map(|e| e.to_string()).collect(),
    })
}
