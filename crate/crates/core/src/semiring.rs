//! Commutative semirings with monus and support, and eight concrete instances.
//!
//! A [`Semiring`] names an instance; a [`Value`] is an element of one of them.
//! Fuzzy and Łukasiewicz share the [`Value::Unit`] carrier, so every operation
//! is a method on the instance rather than on the value.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::error::{Error, Result};

/// The concrete instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Semiring {
    /// `({⊥,⊤}, ∨, ∧, ⊥, ⊤)`
    Boolean,
    /// `(ℕ, +, ·, 0, 1)`
    Bag,
    /// `(ℕ ∪ {∞}, min, +, ∞, 0)`
    Tropical,
    /// `([0,1] ∩ ℚ, max, min, 0, 1)`
    Fuzzy,
    /// `([0,1] ∩ ℚ, max, ⊙, 0, 1)` with `a ⊙ b = max(a + b - 1, 0)`
    Lukasiewicz,
    /// `ℕ[X]`, polynomials with natural coefficients.
    Provenance,
    /// Positive integers paired with a security level; has no monus.
    Security,
    /// `(ℤ, +, ·, 0, 1)`; not zero-sum-free, has no monus.
    Integer,
}

impl Semiring {
    pub const ALL: [Semiring; 8] = [
        Semiring::Boolean,
        Semiring::Bag,
        Semiring::Tropical,
        Semiring::Fuzzy,
        Semiring::Lukasiewicz,
        Semiring::Provenance,
        Semiring::Security,
        Semiring::Integer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Semiring::Boolean => "boolean",
            Semiring::Bag => "bag",
            Semiring::Tropical => "tropical",
            Semiring::Fuzzy => "fuzzy",
            Semiring::Lukasiewicz => "lukasiewicz",
            Semiring::Provenance => "provenance",
            Semiring::Security => "security",
            Semiring::Integer => "integer",
        }
    }

    pub fn descriptor(self) -> SemiringDescriptor {
        use Semiring::*;
        let (zero_sum_free, no_zero_divisors, has_monus, order_decidable) = match self {
            Boolean | Bag | Tropical | Fuzzy | Provenance => (true, true, true, true),
            // 1/2 ⊙ 1/2 = 0
            Lukasiewicz => (true, false, true, true),
            Security => (true, true, false, true),
            // 1 + (-1) = 0, and the natural preorder relates everything
            Integer => (false, true, false, false),
        };
        SemiringDescriptor {
            name: self.name(),
            zero_sum_free,
            no_zero_divisors,
            positive: zero_sum_free && no_zero_divisors,
            has_monus,
            order_decidable,
        }
    }

    pub fn zero(self) -> Value {
        match self {
            Semiring::Boolean => Value::Bool(false),
            Semiring::Bag => Value::Nat(BigUint::zero()),
            Semiring::Tropical => Value::Trop(Tropical::Infinity),
            Semiring::Fuzzy | Semiring::Lukasiewicz => Value::Unit(BigRational::zero()),
            Semiring::Provenance => Value::Poly(Polynomial::zero()),
            Semiring::Security => Value::Sec(SecValue::Zero),
            Semiring::Integer => Value::Int(BigInt::zero()),
        }
    }

    pub fn one(self) -> Value {
        match self {
            Semiring::Boolean => Value::Bool(true),
            Semiring::Bag => Value::Nat(BigUint::one()),
            Semiring::Tropical => Value::Trop(Tropical::Finite(BigUint::zero())),
            Semiring::Fuzzy | Semiring::Lukasiewicz => Value::Unit(BigRational::one()),
            Semiring::Provenance => Value::Poly(Polynomial::one()),
            Semiring::Security => Value::Sec(SecValue::Pair(BigUint::one(), Level::P)),
            Semiring::Integer => Value::Int(BigInt::one()),
        }
    }

    /// Whether `v` is a well-formed element of this instance.
    pub fn contains(self, v: &Value) -> bool {
        match (self, v) {
            (Semiring::Boolean, Value::Bool(_))
            | (Semiring::Bag, Value::Nat(_))
            | (Semiring::Tropical, Value::Trop(_))
            | (Semiring::Integer, Value::Int(_)) => true,
            (Semiring::Fuzzy | Semiring::Lukasiewicz, Value::Unit(q)) => {
                !q.is_negative() && *q <= BigRational::one()
            }
            (Semiring::Provenance, Value::Poly(p)) => p.is_canonical(),
            (Semiring::Security, Value::Sec(SecValue::Zero)) => true,
            (Semiring::Security, Value::Sec(SecValue::Pair(x, _))) => !x.is_zero(),
            _ => false,
        }
    }

    fn check(self, v: &Value) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::InstanceMismatch {
                semiring: self.name(),
                value: v.to_string(),
            })
        }
    }

    pub fn add(self, a: &Value, b: &Value) -> Result<Value> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (a, b) {
            (Value::Bool(x), Value::Bool(y)) => Value::Bool(*x || *y),
            (Value::Nat(x), Value::Nat(y)) => Value::Nat(x + y),
            (Value::Trop(x), Value::Trop(y)) => Value::Trop(x.clone().min(y.clone())),
            (Value::Unit(x), Value::Unit(y)) => Value::Unit(x.max(y).clone()),
            (Value::Poly(x), Value::Poly(y)) => Value::Poly(x.add(y)),
            (Value::Sec(x), Value::Sec(y)) => Value::Sec(x.add(y)),
            (Value::Int(x), Value::Int(y)) => Value::Int(x + y),
            _ => unreachable!("operands checked against the instance"),
        })
    }

    pub fn mul(self, a: &Value, b: &Value) -> Result<Value> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (a, b) {
            (Value::Bool(x), Value::Bool(y)) => Value::Bool(*x && *y),
            (Value::Nat(x), Value::Nat(y)) => Value::Nat(x * y),
            (Value::Trop(x), Value::Trop(y)) => Value::Trop(x.plus(y)),
            (Value::Unit(x), Value::Unit(y)) => match self {
                Semiring::Fuzzy => Value::Unit(x.min(y).clone()),
                _ => {
                    let s = x + y - BigRational::one();
                    Value::Unit(if s.is_negative() {
                        BigRational::zero()
                    } else {
                        s
                    })
                }
            },
            (Value::Poly(x), Value::Poly(y)) => Value::Poly(x.mul(y)),
            (Value::Sec(x), Value::Sec(y)) => Value::Sec(x.mul(y)),
            (Value::Int(x), Value::Int(y)) => Value::Int(x * y),
            _ => unreachable!("operands checked against the instance"),
        })
    }

    /// The least `c` (in the natural order) with `a ⪯ b + c`, by closed form.
    pub fn monus(self, a: &Value, b: &Value) -> Result<Value> {
        if !self.descriptor().has_monus {
            return Err(Error::MonusUnsupported(self.name()));
        }
        self.check(a)?;
        self.check(b)?;
        Ok(match (a, b) {
            (Value::Bool(x), Value::Bool(y)) => Value::Bool(*x && !*y),
            (Value::Nat(x), Value::Nat(y)) => {
                Value::Nat(if x >= y { x - y } else { BigUint::zero() })
            }
            (Value::Trop(x), Value::Trop(y)) => {
                // a < b in the standard order of ℕ ∪ {∞}
                if x < y {
                    Value::Trop(x.clone())
                } else {
                    Value::Trop(Tropical::Infinity)
                }
            }
            (Value::Unit(x), Value::Unit(y)) => Value::Unit(if x > y {
                x.clone()
            } else {
                BigRational::zero()
            }),
            (Value::Poly(x), Value::Poly(y)) => Value::Poly(x.monus(y)),
            _ => unreachable!("operands checked against the instance"),
        })
    }

    pub fn support(self, a: &Value) -> Result<Value> {
        self.check(a)?;
        Ok(if a.is_zero() { self.zero() } else { self.one() })
    }

    /// Decides the natural order `a ⪯ b` (some `c` has `a + c = b`).
    pub fn nat_leq(self, a: &Value, b: &Value) -> Result<bool> {
        if !self.descriptor().order_decidable {
            return Err(Error::OrderUndecidable(self.name()));
        }
        self.check(a)?;
        self.check(b)?;
        Ok(match (a, b) {
            (Value::Bool(x), Value::Bool(y)) => !*x || *y,
            (Value::Nat(x), Value::Nat(y)) => x <= y,
            // reversed: ∞ is least
            (Value::Trop(x), Value::Trop(y)) => x >= y,
            (Value::Unit(x), Value::Unit(y)) => x <= y,
            (Value::Poly(x), Value::Poly(y)) => x.coefficientwise_leq(y),
            (Value::Sec(x), Value::Sec(y)) => x.leq(y),
            _ => unreachable!("operands checked against the instance"),
        })
    }

    pub fn sum<'a>(self, values: impl IntoIterator<Item = &'a Value>) -> Result<Value> {
        values
            .into_iter()
            .try_fold(self.zero(), |acc, v| self.add(&acc, v))
    }

    pub fn product<'a>(self, values: impl IntoIterator<Item = &'a Value>) -> Result<Value> {
        values
            .into_iter()
            .try_fold(self.one(), |acc, v| self.mul(&acc, v))
    }

    /// Parses the text encoding used in tables and on the command line.
    pub fn parse_value(self, text: &str) -> Result<Value> {
        let bad = || Error::InvalidValue {
            semiring: self.name(),
            text: text.to_string(),
        };
        let t = text.trim();
        let v = match self {
            Semiring::Boolean => match t {
                "true" | "1" | "⊤" => Value::Bool(true),
                "false" | "0" | "⊥" => Value::Bool(false),
                _ => return Err(bad()),
            },
            Semiring::Bag => Value::Nat(t.parse().map_err(|_| bad())?),
            Semiring::Tropical => match t {
                "inf" | "∞" => Value::Trop(Tropical::Infinity),
                _ => Value::Trop(Tropical::Finite(t.parse().map_err(|_| bad())?)),
            },
            Semiring::Fuzzy | Semiring::Lukasiewicz => {
                let q = match t.split_once('/') {
                    Some((p, q)) => {
                        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                        if q.is_zero() {
                            return Err(bad());
                        }
                        BigRational::new(p, q)
                    }
                    None => BigRational::from_integer(t.parse().map_err(|_| bad())?),
                };
                Value::Unit(q)
            }
            Semiring::Provenance => Value::Poly(Polynomial::from_str(t).map_err(|_| bad())?),
            Semiring::Security => Value::Sec(SecValue::from_str(t).map_err(|_| bad())?),
            Semiring::Integer => Value::Int(t.parse().map_err(|_| bad())?),
        };
        self.check(&v).map_err(|_| bad())?;
        Ok(v)
    }

    /// JSON encoding: booleans as JSON booleans, polynomials as term lists,
    /// everything else as its text encoding.
    pub fn value_to_json(self, v: &Value) -> serde_json::Value {
        match v {
            Value::Bool(b) => json!(b),
            Value::Poly(p) => serde_json::Value::Array(
                p.terms()
                    .map(|(mono, coef)| json!({ "coef": coef.to_string(), "mono": mono.0 }))
                    .collect(),
            ),
            other => json!(other.to_string()),
        }
    }

    pub fn value_from_json(self, j: &serde_json::Value) -> Result<Value> {
        let bad = || Error::InvalidValue {
            semiring: self.name(),
            text: j.to_string(),
        };
        match (self, j) {
            (Semiring::Boolean, serde_json::Value::Bool(b)) => Ok(Value::Bool(*b)),
            (Semiring::Provenance, serde_json::Value::Array(terms)) => {
                let mut poly = Polynomial::zero();
                for term in terms {
                    let coef: BigUint = term
                        .get("coef")
                        .and_then(|c| c.as_str())
                        .ok_or_else(bad)?
                        .parse()
                        .map_err(|_| bad())?;
                    let mut mono = BTreeMap::new();
                    if let Some(m) = term.get("mono") {
                        let m = m.as_object().ok_or_else(bad)?;
                        for (name, e) in m {
                            let e = e
                                .as_u64()
                                .and_then(|e| u32::try_from(e).ok())
                                .ok_or_else(bad)?;
                            mono.insert(name.clone(), e);
                        }
                    }
                    poly = poly.add(&Polynomial::term(coef, Monomial::new(mono)));
                }
                Ok(Value::Poly(poly))
            }
            (_, serde_json::Value::String(s)) => self.parse_value(s),
            (_, serde_json::Value::Number(n)) => self.parse_value(&n.to_string()),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Semiring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "boolean" | "bool" | "b" => Semiring::Boolean,
            "bag" | "nat" | "n" => Semiring::Bag,
            "tropical" | "trop" => Semiring::Tropical,
            "fuzzy" => Semiring::Fuzzy,
            "lukasiewicz" | "luk" => Semiring::Lukasiewicz,
            "provenance" | "poly" | "nx" => Semiring::Provenance,
            "security" | "sec" => Semiring::Security,
            "integer" | "int" | "z" => Semiring::Integer,
            _ => return Err(Error::UnknownSemiring(s.to_string())),
        })
    }
}

/// Capability flags of an instance. `positive` is derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SemiringDescriptor {
    pub name: &'static str,
    pub zero_sum_free: bool,
    pub no_zero_divisors: bool,
    pub positive: bool,
    pub has_monus: bool,
    pub order_decidable: bool,
}

/// A scalar of one concrete instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Bool(bool),
    Nat(BigUint),
    Trop(Tropical),
    /// A reduced fraction in `[0, 1]`; shared by fuzzy and Łukasiewicz.
    Unit(BigRational),
    Poly(Polynomial),
    Sec(SecValue),
    Int(BigInt),
}

impl Value {
    pub fn nat(n: u64) -> Self {
        Value::Nat(BigUint::from(n))
    }

    pub fn trop(n: u64) -> Self {
        Value::Trop(Tropical::Finite(BigUint::from(n)))
    }

    pub fn unit(p: i64, q: i64) -> Self {
        Value::Unit(BigRational::new(p.into(), q.into()))
    }

    pub fn int(n: i64) -> Self {
        Value::Int(BigInt::from(n))
    }

    pub fn sec(x: u64, level: Level) -> Self {
        Value::Sec(SecValue::Pair(BigUint::from(x), level))
    }

    /// Zero test. Zero is the same notion for every instance sharing a carrier.
    pub fn is_zero(&self) -> bool {
        match self {
            Value::Bool(b) => !b,
            Value::Nat(n) => n.is_zero(),
            Value::Trop(t) => *t == Tropical::Infinity,
            Value::Unit(q) => q.is_zero(),
            Value::Poly(p) => p.is_zero(),
            Value::Sec(s) => *s == SecValue::Zero,
            Value::Int(n) => n.is_zero(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Nat(n) => write!(f, "{n}"),
            Value::Trop(t) => write!(f, "{t}"),
            Value::Unit(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Value::Poly(p) => write!(f, "{p}"),
            Value::Sec(s) => write!(f, "{s}"),
            Value::Int(n) => write!(f, "{n}"),
        }
    }
}

/// An element of `ℕ ∪ {∞}`, ordered in the standard way (∞ greatest).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tropical {
    Finite(BigUint),
    Infinity,
}

impl Tropical {
    fn plus(&self, other: &Tropical) -> Tropical {
        match (self, other) {
            (Tropical::Finite(a), Tropical::Finite(b)) => Tropical::Finite(a + b),
            _ => Tropical::Infinity,
        }
    }
}

impl fmt::Display for Tropical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tropical::Finite(n) => write!(f, "{n}"),
            Tropical::Infinity => f.write_str("inf"),
        }
    }
}

/// Security levels, `I < T < S < C < P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    /// inaccessible
    I,
    /// top secret
    T,
    /// secret
    S,
    /// confidential
    C,
    /// public
    P,
}

impl Level {
    pub const ALL: [Level; 5] = [Level::I, Level::T, Level::S, Level::C, Level::P];

    fn letter(self) -> char {
        match self {
            Level::I => 'I',
            Level::T => 'T',
            Level::S => 'S',
            Level::C => 'C',
            Level::P => 'P',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SecValue {
    Zero,
    /// `(x, s)` with `x ≥ 1`.
    Pair(BigUint, Level),
}

impl SecValue {
    fn add(&self, other: &SecValue) -> SecValue {
        match (self, other) {
            (SecValue::Zero, k) | (k, SecValue::Zero) => k.clone(),
            (SecValue::Pair(x, s), SecValue::Pair(y, t)) => SecValue::Pair(x + y, (*s).min(*t)),
        }
    }

    fn mul(&self, other: &SecValue) -> SecValue {
        match (self, other) {
            (SecValue::Zero, _) | (_, SecValue::Zero) => SecValue::Zero,
            (SecValue::Pair(x, s), SecValue::Pair(y, t)) => SecValue::Pair(x * y, (*s).min(*t)),
        }
    }

    /// `(x,s) ⪯ (x',t)` iff equal, or `x < x'` and `t ≤ s`: adding `(y,u)`
    /// strictly grows the count and can only lower the level.
    fn leq(&self, other: &SecValue) -> bool {
        match (self, other) {
            (SecValue::Zero, _) => true,
            (_, SecValue::Zero) => false,
            (SecValue::Pair(x, s), SecValue::Pair(y, t)) => (x == y && s == t) || (x < y && t <= s),
        }
    }
}

impl fmt::Display for SecValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SecValue::Zero => f.write_str("0"),
            SecValue::Pair(x, l) => write!(f, "({x},{})", l.letter()),
        }
    }
}

impl FromStr for SecValue {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        let s = s.trim();
        if s == "0" {
            return Ok(SecValue::Zero);
        }
        let inner = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or(())?;
        let (x, l) = inner.split_once(',').ok_or(())?;
        let x: BigUint = x.trim().parse().map_err(|_| ())?;
        let level = match l.trim() {
            "I" => Level::I,
            "T" => Level::T,
            "S" => Level::S,
            "C" => Level::C,
            "P" => Level::P,
            _ => return Err(()),
        };
        if x.is_zero() {
            return Err(());
        }
        Ok(SecValue::Pair(x, level))
    }
}

/// A monomial `x^α`, as indeterminate name ↦ positive exponent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(BTreeMap<String, u32>);

impl Monomial {
    pub fn new(exponents: BTreeMap<String, u32>) -> Self {
        Monomial(exponents.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn var(name: &str) -> Self {
        Monomial(BTreeMap::from([(name.to_string(), 1)]))
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn exponents(&self) -> &BTreeMap<String, u32> {
        &self.0
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (k, e) in &other.0 {
            *out.entry(k.clone()).or_insert(0) += e;
        }
        Monomial(out)
    }
}

/// A polynomial in `ℕ[X]` in canonical form: no zero coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial(BTreeMap<Monomial, BigUint>);

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::constant(1u32)
    }

    pub fn constant(c: impl Into<BigUint>) -> Self {
        Self::term(c.into(), Monomial::default())
    }

    pub fn var(name: &str) -> Self {
        Self::term(BigUint::one(), Monomial::var(name))
    }

    pub fn term(coef: BigUint, mono: Monomial) -> Self {
        let mut m = BTreeMap::new();
        if !coef.is_zero() {
            m.insert(mono, coef);
        }
        Polynomial(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigUint)> {
        self.0.iter()
    }

    pub fn coefficient(&self, mono: &Monomial) -> BigUint {
        self.0.get(mono).cloned().unwrap_or_default()
    }

    fn is_canonical(&self) -> bool {
        self.0
            .iter()
            .all(|(m, c)| !c.is_zero() && m.0.values().all(|e| *e > 0))
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.0.clone();
        for (m, c) in &other.0 {
            *out.entry(m.clone()).or_default() += c;
        }
        Polynomial(out)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out: BTreeMap<Monomial, BigUint> = BTreeMap::new();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                *out.entry(m1.times(m2)).or_default() += c1 * c2;
            }
        }
        Polynomial(out)
    }

    /// Coefficientwise truncated subtraction.
    pub fn monus(&self, other: &Polynomial) -> Polynomial {
        let mut out = BTreeMap::new();
        for (m, c) in &self.0 {
            let d = other.coefficient(m);
            if *c > d {
                out.insert(m.clone(), c - d);
            }
        }
        Polynomial(out)
    }

    fn coefficientwise_leq(&self, other: &Polynomial) -> bool {
        self.0.iter().all(|(m, c)| *c <= other.coefficient(m))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        // highest degree first
        let mut terms: Vec<_> = self.0.iter().collect();
        terms.sort_by(|(a, _), (b, _)| b.degree().cmp(&a.degree()).then_with(|| a.cmp(b)));
        for (i, (mono, coef)) in terms.into_iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let mut factors = Vec::new();
            if !coef.is_one() || mono.0.is_empty() {
                factors.push(coef.to_string());
            }
            for (name, e) in &mono.0 {
                if *e == 1 {
                    factors.push(name.clone());
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for Polynomial {
    type Err = ();

    /// Parses sums of products such as `2*x^2*y + x + 3`.
    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        let mut poly = Polynomial::zero();
        for term in s.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(());
            }
            let mut coef = BigUint::one();
            let mut mono = BTreeMap::new();
            for factor in term.split('*') {
                let factor = factor.trim();
                if factor.chars().all(|c| c.is_ascii_digit()) && !factor.is_empty() {
                    coef *= factor.parse::<BigUint>().map_err(|_| ())?;
                    continue;
                }
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (n.trim(), e.trim().parse::<u32>().map_err(|_| ())?),
                    None => (factor, 1),
                };
                let valid = name
                    .chars()
                    .next()
                    .is_some_and(|c| c.is_alphabetic() || c == '_')
                    && name.chars().all(|c| c.is_alphanumeric() || c == '_');
                if !valid {
                    return Err(());
                }
                *mono.entry(name.to_string()).or_insert(0) += exp;
            }
            poly = poly.add(&Polynomial::term(coef, Monomial::new(mono)));
        }
        Ok(poly)
    }
}
