//! K-relations, databases and structures.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde_json::json;

use crate::error::{Error, Result};
use crate::semiring::{Semiring, Value};

/// A symbol of the underlying domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(Arc<str>);

impl Elem {
    pub fn new(symbol: &str) -> Self {
        Elem(Arc::from(symbol))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Elem {
    fn from(s: &str) -> Self {
        Elem::new(s)
    }
}

/// A tuple; the empty vector is the unique 0-ary tuple.
pub type Tuple = Vec<Elem>;

pub fn tuple(elems: &[&str]) -> Tuple {
    elems.iter().map(|e| Elem::new(e)).collect()
}

pub fn format_tuple(t: &[Elem]) -> String {
    let inner: Vec<&str> = t.iter().map(Elem::as_str).collect();
    format!("({})", inner.join(","))
}

/// A selection condition over 1-based column indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Condition {
    Eq(usize, usize),
    Neq(usize, usize),
    And(Box<Condition>, Box<Condition>),
    Or(Box<Condition>, Box<Condition>),
}

impl Condition {
    pub fn and(a: Condition, b: Condition) -> Self {
        Condition::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Condition, b: Condition) -> Self {
        Condition::Or(Box::new(a), Box::new(b))
    }

    /// Checks every index is in `1..=arity`.
    pub fn check(&self, arity: usize) -> Result<()> {
        match self {
            Condition::Eq(i, j) | Condition::Neq(i, j) => {
                for &k in [i, j] {
                    if k == 0 || k > arity {
                        return Err(Error::IndexOutOfRange { index: k, arity });
                    }
                }
                Ok(())
            }
            Condition::And(a, b) | Condition::Or(a, b) => {
                a.check(arity)?;
                b.check(arity)
            }
        }
    }

    pub fn holds(&self, t: &[Elem]) -> bool {
        match self {
            Condition::Eq(i, j) => t[i - 1] == t[j - 1],
            Condition::Neq(i, j) => t[i - 1] != t[j - 1],
            Condition::And(a, b) => a.holds(t) && b.holds(t),
            Condition::Or(a, b) => a.holds(t) || b.holds(t),
        }
    }
}

/// A finite-support map from `n`-tuples to nonzero values of one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KRelation {
    arity: usize,
    semiring: Semiring,
    rows: BTreeMap<Tuple, Value>,
}

impl KRelation {
    pub fn empty(semiring: Semiring, arity: usize) -> Self {
        KRelation {
            arity,
            semiring,
            rows: BTreeMap::new(),
        }
    }

    /// Builds a relation, adding up the values of repeated tuples.
    pub fn from_rows(
        semiring: Semiring,
        arity: usize,
        rows: impl IntoIterator<Item = (Tuple, Value)>,
    ) -> Result<Self> {
        let mut r = KRelation::empty(semiring, arity);
        for (t, v) in rows {
            r.accumulate(t, v)?;
        }
        Ok(r)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn semiring(&self) -> Semiring {
        self.semiring
    }

    pub fn get(&self, t: &[Elem]) -> Value {
        self.rows
            .get(t)
            .cloned()
            .unwrap_or_else(|| self.semiring.zero())
    }

    /// Stored rows in sorted tuple order; every value is nonzero.
    pub fn rows(&self) -> impl Iterator<Item = (&Tuple, &Value)> {
        self.rows.iter()
    }

    pub fn support_tuples(&self) -> impl Iterator<Item = &Tuple> {
        self.rows.keys()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Overwrites the value at `t`; a zero value removes the row.
    pub fn set(&mut self, t: Tuple, v: Value) -> Result<()> {
        if t.len() != self.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: t.len(),
            });
        }
        self.semiring.support(&v)?;
        if v.is_zero() {
            self.rows.remove(&t);
        } else {
            self.rows.insert(t, v);
        }
        Ok(())
    }

    fn accumulate(&mut self, t: Tuple, v: Value) -> Result<()> {
        let sum = match self.rows.get(&t) {
            Some(old) => self.semiring.add(old, &v)?,
            None => v,
        };
        self.set(t, sum)
    }

    fn same_shape(&self, other: &KRelation) -> Result<()> {
        self.same_semiring(other)?;
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        Ok(())
    }

    fn same_semiring(&self, other: &KRelation) -> Result<()> {
        if self.semiring != other.semiring {
            return Err(Error::SemiringMismatch {
                left: self.semiring.name(),
                right: other.semiring.name(),
            });
        }
        Ok(())
    }

    pub fn union(&self, other: &KRelation) -> Result<KRelation> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (t, v) in &other.rows {
            out.accumulate(t.clone(), v.clone())?;
        }
        Ok(out)
    }

    pub fn difference(&self, other: &KRelation) -> Result<KRelation> {
        self.same_shape(other)?;
        let k = self.semiring;
        if !k.descriptor().has_monus {
            return Err(Error::MonusUnsupported(k.name()));
        }
        let mut out = KRelation::empty(k, self.arity);
        for (t, v) in &self.rows {
            out.set(t.clone(), k.monus(v, &other.get(t))?)?;
        }
        Ok(out)
    }

    pub fn product(&self, other: &KRelation) -> Result<KRelation> {
        self.same_semiring(other)?;
        let k = self.semiring;
        let mut out = KRelation::empty(k, self.arity + other.arity);
        for (t1, v1) in &self.rows {
            for (t2, v2) in &other.rows {
                let t: Tuple = t1.iter().chain(t2).cloned().collect();
                out.set(t, k.mul(v1, v2)?)?;
            }
        }
        Ok(out)
    }

    /// Projection onto the 1-based columns `v`, summing collapsed rows.
    pub fn project(&self, v: &[usize]) -> Result<KRelation> {
        check_projection(v, self.arity)?;
        let mut out = KRelation::empty(self.semiring, v.len());
        for (t, val) in &self.rows {
            let key: Tuple = v.iter().map(|&i| t[i - 1].clone()).collect();
            out.accumulate(key, val.clone())?;
        }
        Ok(out)
    }

    pub fn select(&self, cond: &Condition) -> Result<KRelation> {
        cond.check(self.arity)?;
        Ok(KRelation {
            arity: self.arity,
            semiring: self.semiring,
            rows: self
                .rows
                .iter()
                .filter(|(t, _)| cond.holds(t))
                .map(|(t, v)| (t.clone(), v.clone()))
                .collect(),
        })
    }

    pub fn support(&self) -> KRelation {
        let one = self.semiring.one();
        KRelation {
            arity: self.arity,
            semiring: self.semiring,
            rows: self.rows.keys().map(|t| (t.clone(), one.clone())).collect(),
        }
    }

    /// `(R₁ ÷ R₂)(a) = s(Σ_b R₁(a,b)) · Π_{b ∈ supp R₂} R₁(a,b)`.
    ///
    /// Equal arities are accepted and give a 0-ary result.
    pub fn divide(&self, other: &KRelation) -> Result<KRelation> {
        self.same_semiring(other)?;
        if self.arity < other.arity {
            return Err(Error::DivArity {
                left: self.arity,
                right: other.arity,
            });
        }
        let k = self.semiring;
        let split = self.arity - other.arity;
        let mut groups: BTreeMap<&[Elem], BTreeMap<&[Elem], &Value>> = BTreeMap::new();
        for (t, v) in &self.rows {
            groups
                .entry(&t[..split])
                .or_default()
                .insert(&t[split..], v);
        }
        let zero = k.zero();
        let mut out = KRelation::empty(k, split);
        for (a, group) in groups {
            // summed literally, so cancelling values in ℤ give a zero guard
            let guard = k.support(&k.sum(group.values().copied())?)?;
            let mut acc = guard;
            for b in other.rows.keys() {
                if acc.is_zero() {
                    break;
                }
                let v = group.get(b.as_slice()).copied().unwrap_or(&zero);
                acc = k.mul(&acc, v)?;
            }
            out.set(a.to_vec(), acc)?;
        }
        Ok(out)
    }

    /// Every element occurring in a support tuple.
    pub fn elements(&self) -> BTreeSet<Elem> {
        self.rows.keys().flatten().cloned().collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<_> = self
            .rows
            .iter()
            .map(|(t, v)| {
                json!({
                    "t": t.iter().map(Elem::as_str).collect::<Vec<_>>(),
                    "v": self.semiring.value_to_json(v),
                })
            })
            .collect();
        json!({ "arity": self.arity, "rows": rows })
    }

    fn from_json(semiring: Semiring, name: &str, j: &serde_json::Value) -> Result<Self> {
        let bad = |msg: &str| Error::Database(format!("relation `{name}`: {msg}"));
        let arity = j
            .get("arity")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| bad("missing arity"))? as usize;
        let rows = match j.get("rows") {
            None => &Vec::new(),
            Some(r) => r.as_array().ok_or_else(|| bad("rows must be a list"))?,
        };
        let mut rel = KRelation::empty(semiring, arity);
        for row in rows {
            let t: Tuple = row
                .get("t")
                .and_then(serde_json::Value::as_array)
                .ok_or_else(|| bad("row without a tuple"))?
                .iter()
                .map(|e| e.as_str().map(Elem::new))
                .collect::<Option<_>>()
                .ok_or_else(|| bad("tuple elements must be strings"))?;
            if t.len() != arity {
                return Err(bad(&format!(
                    "tuple {} has the wrong length",
                    format_tuple(&t)
                )));
            }
            let v = semiring
                .value_from_json(row.get("v").ok_or_else(|| bad("row without a value"))?)?;
            if v.is_zero() {
                return Err(bad(&format!("zero value at {}", format_tuple(&t))));
            }
            if rel.rows.contains_key(&t) {
                return Err(bad(&format!("duplicate tuple {}", format_tuple(&t))));
            }
            rel.rows.insert(t, v);
        }
        Ok(rel)
    }
}

impl fmt::Display for KRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self
            .rows
            .iter()
            .map(|(t, v)| format!("{}↦{v}", format_tuple(t)))
            .collect();
        write!(f, "{{{}}}", body.join(", "))
    }
}

pub(crate) fn check_projection(v: &[usize], arity: usize) -> Result<()> {
    let mut seen = BTreeSet::new();
    for &i in v {
        if i == 0 || i > arity {
            return Err(Error::IndexOutOfRange { index: i, arity });
        }
        if !seen.insert(i) {
            return Err(Error::DuplicateIndex(i));
        }
    }
    Ok(())
}

/// Relation names with their arities, in a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema(Vec<(String, usize)>);

impl Schema {
    pub fn new(entries: impl IntoIterator<Item = (impl Into<String>, usize)>) -> Result<Self> {
        let mut out: Vec<(String, usize)> = Vec::new();
        for (name, arity) in entries {
            let name = name.into();
            if arity == 0 {
                return Err(Error::Database(format!(
                    "relation `{name}` must have arity ≥ 1"
                )));
            }
            if out.iter().any(|(n, _)| *n == name) {
                return Err(Error::Database(format!("relation `{name}` declared twice")));
            }
            out.push((name, arity));
        }
        Ok(Schema(out))
    }

    pub fn arity(&self, name: &str) -> Result<usize> {
        self.0
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, a)| *a)
            .ok_or_else(|| Error::UnknownRelation(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.0.iter().map(|(n, a)| (n.as_str(), *a))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for Schema {
    type Err = Error;

    /// Parses `R:2,S:1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Database(format!("bad schema `{s}`, expected e.g. R:2,S:1"));
        let entries = s
            .split(',')
            .map(|part| {
                let (name, arity) = part.split_once(':').ok_or_else(bad)?;
                let arity = arity.trim().parse::<usize>().map_err(|_| bad())?;
                Ok((name.trim().to_string(), arity))
            })
            .collect::<Result<Vec<_>>>()?;
        Schema::new(entries)
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(n, a)| format!("{n}:{a}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// Named K-relations over a schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KDatabase {
    semiring: Semiring,
    schema: Schema,
    relations: BTreeMap<String, KRelation>,
}

impl KDatabase {
    /// A database with every relation empty.
    pub fn new(semiring: Semiring, schema: Schema) -> Self {
        let relations = schema
            .iter()
            .map(|(n, a)| (n.to_string(), KRelation::empty(semiring, a)))
            .collect();
        KDatabase {
            semiring,
            schema,
            relations,
        }
    }

    pub fn semiring(&self) -> Semiring {
        self.semiring
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn relation(&self, name: &str) -> Result<&KRelation> {
        self.relations
            .get(name)
            .ok_or_else(|| Error::UnknownRelation(name.to_string()))
    }

    pub fn set_relation(&mut self, name: &str, rel: KRelation) -> Result<()> {
        let arity = self.schema.arity(name)?;
        if rel.semiring() != self.semiring {
            return Err(Error::SemiringMismatch {
                left: self.semiring.name(),
                right: rel.semiring().name(),
            });
        }
        if rel.arity() != arity {
            return Err(Error::ArityMismatch {
                left: arity,
                right: rel.arity(),
            });
        }
        self.relations.insert(name.to_string(), rel);
        Ok(())
    }

    /// Some relation has nonempty support.
    pub fn is_nontrivial(&self) -> bool {
        self.relations.values().any(|r| !r.is_empty())
    }

    pub fn active_domain(&self) -> BTreeSet<Elem> {
        self.relations
            .values()
            .flat_map(KRelation::elements)
            .collect()
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let j: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Database(e.to_string()))?;
        Self::from_json(&j)
    }

    pub fn from_json(j: &serde_json::Value) -> Result<Self> {
        let semiring: Semiring = j
            .get("semiring")
            .and_then(serde_json::Value::as_str)
            .ok_or_else(|| Error::Database("missing `semiring`".into()))?
            .parse()?;
        let rels = j
            .get("relations")
            .and_then(serde_json::Value::as_object)
            .ok_or_else(|| Error::Database("missing `relations` object".into()))?;
        let mut parsed = Vec::new();
        for (name, body) in rels {
            parsed.push((name.clone(), KRelation::from_json(semiring, name, body)?));
        }
        let schema = Schema::new(parsed.iter().map(|(n, r)| (n.clone(), r.arity())))?;
        let mut db = KDatabase::new(semiring, schema);
        for (name, rel) in parsed {
            db.set_relation(&name, rel)?;
        }
        Ok(db)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rels: serde_json::Map<String, serde_json::Value> = self
            .schema
            .iter()
            .map(|(n, _)| (n.to_string(), self.relations[n].to_json()))
            .collect();
        json!({ "semiring": self.semiring.name(), "relations": rels })
    }
}

/// A database paired with a finite nonempty universe containing its support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KStructure {
    universe: BTreeSet<Elem>,
    db: KDatabase,
}

impl KStructure {
    /// The structure `A(I)` whose universe is the active domain.
    pub fn from_database(db: &KDatabase) -> Result<Self> {
        Self::with_universe(db, db.active_domain())
    }

    pub fn with_universe(db: &KDatabase, universe: BTreeSet<Elem>) -> Result<Self> {
        if universe.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        for rel in db.relations.values() {
            if let Some(t) = rel
                .support_tuples()
                .find(|t| t.iter().any(|e| !universe.contains(e)))
            {
                return Err(Error::OutsideUniverse {
                    tuple: format_tuple(t),
                });
            }
        }
        Ok(KStructure {
            universe,
            db: db.clone(),
        })
    }

    pub fn universe(&self) -> &BTreeSet<Elem> {
        &self.universe
    }

    pub fn database(&self) -> &KDatabase {
        &self.db
    }

    pub fn semiring(&self) -> Semiring {
        self.db.semiring
    }

    pub fn relation(&self, name: &str) -> Result<&KRelation> {
        self.db.relation(name)
    }
}
