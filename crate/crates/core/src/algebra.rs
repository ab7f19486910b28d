//! Relational algebra expressions: syntax, arity checking and evaluation.
//!
//! The concrete grammar is keyword-call syntax:
//!
//! ```text
//! expr := NAME
//!       | union(expr, expr) | diff(expr, expr) | times(expr, expr) | div(expr, expr)
//!       | supp(expr)
//!       | proj[i, j, ...](expr)
//!       | select[cond](expr)
//! cond := conj (or conj)*
//! conj := test (and test)*
//! test := #i = #j | #i != #j | (cond)
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexer::{Cursor, Tok};
use crate::relation::{check_projection, Condition, KDatabase, KRelation, Schema};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraExpr {
    Rel(String),
    Union(Box<AlgebraExpr>, Box<AlgebraExpr>),
    Diff(Box<AlgebraExpr>, Box<AlgebraExpr>),
    Product(Box<AlgebraExpr>, Box<AlgebraExpr>),
    /// 1-based column list; may be empty.
    Project(Vec<usize>, Box<AlgebraExpr>),
    Select(Condition, Box<AlgebraExpr>),
    Supp(Box<AlgebraExpr>),
    Div(Box<AlgebraExpr>, Box<AlgebraExpr>),
}

impl AlgebraExpr {
    pub fn rel(name: &str) -> Self {
        AlgebraExpr::Rel(name.to_string())
    }

    pub fn union(a: AlgebraExpr, b: AlgebraExpr) -> Self {
        AlgebraExpr::Union(Box::new(a), Box::new(b))
    }

    pub fn diff(a: AlgebraExpr, b: AlgebraExpr) -> Self {
        AlgebraExpr::Diff(Box::new(a), Box::new(b))
    }

    pub fn product(a: AlgebraExpr, b: AlgebraExpr) -> Self {
        AlgebraExpr::Product(Box::new(a), Box::new(b))
    }

    pub fn project(v: Vec<usize>, e: AlgebraExpr) -> Self {
        AlgebraExpr::Project(v, Box::new(e))
    }

    pub fn select(cond: Condition, e: AlgebraExpr) -> Self {
        AlgebraExpr::Select(cond, Box::new(e))
    }

    pub fn supp(e: AlgebraExpr) -> Self {
        AlgebraExpr::Supp(Box::new(e))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(a: AlgebraExpr, b: AlgebraExpr) -> Self {
        AlgebraExpr::Div(Box::new(a), Box::new(b))
    }

    pub fn arity(&self, schema: &Schema) -> Result<usize> {
        match self {
            AlgebraExpr::Rel(name) => schema.arity(name),
            AlgebraExpr::Union(a, b) | AlgebraExpr::Diff(a, b) => {
                let (n, m) = (a.arity(schema)?, b.arity(schema)?);
                if n != m {
                    return Err(Error::ArityMismatch { left: n, right: m });
                }
                Ok(n)
            }
            AlgebraExpr::Product(a, b) => Ok(a.arity(schema)? + b.arity(schema)?),
            AlgebraExpr::Project(v, e) => {
                check_projection(v, e.arity(schema)?)?;
                Ok(v.len())
            }
            AlgebraExpr::Select(cond, e) => {
                let n = e.arity(schema)?;
                cond.check(n)?;
                Ok(n)
            }
            AlgebraExpr::Supp(e) => e.arity(schema),
            AlgebraExpr::Div(a, b) => {
                let (n, m) = (a.arity(schema)?, b.arity(schema)?);
                if n < m {
                    return Err(Error::DivArity { left: n, right: m });
                }
                Ok(n - m)
            }
        }
    }

    /// Evaluates against `db`. Trivial databases are accepted; callers that
    /// care can check [`KDatabase::is_nontrivial`].
    pub fn eval(&self, db: &KDatabase) -> Result<KRelation> {
        self.arity(db.schema())?;
        self.eval_checked(db)
    }

    fn eval_checked(&self, db: &KDatabase) -> Result<KRelation> {
        match self {
            AlgebraExpr::Rel(name) => Ok(db.relation(name)?.clone()),
            AlgebraExpr::Union(a, b) => a.eval_checked(db)?.union(&b.eval_checked(db)?),
            AlgebraExpr::Diff(a, b) => a.eval_checked(db)?.difference(&b.eval_checked(db)?),
            AlgebraExpr::Product(a, b) => a.eval_checked(db)?.product(&b.eval_checked(db)?),
            AlgebraExpr::Project(v, e) => e.eval_checked(db)?.project(v),
            AlgebraExpr::Select(c, e) => e.eval_checked(db)?.select(c),
            AlgebraExpr::Supp(e) => Ok(e.eval_checked(db)?.support()),
            AlgebraExpr::Div(a, b) => a.eval_checked(db)?.divide(&b.eval_checked(db)?),
        }
    }

    fn children(&self) -> Vec<&AlgebraExpr> {
        match self {
            AlgebraExpr::Rel(_) => vec![],
            AlgebraExpr::Project(_, e) | AlgebraExpr::Select(_, e) | AlgebraExpr::Supp(e) => {
                vec![e]
            }
            AlgebraExpr::Union(a, b)
            | AlgebraExpr::Diff(a, b)
            | AlgebraExpr::Product(a, b)
            | AlgebraExpr::Div(a, b) => vec![a, b],
        }
    }

    fn any_node(&self, pred: &impl Fn(&AlgebraExpr) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.any_node(pred))
    }

    pub fn contains_div(&self) -> bool {
        self.any_node(&|e| matches!(e, AlgebraExpr::Div(..)))
    }

    pub fn contains_diff(&self) -> bool {
        self.any_node(&|e| matches!(e, AlgebraExpr::Diff(..)))
    }

    pub fn contains_supp(&self) -> bool {
        self.any_node(&|e| matches!(e, AlgebraExpr::Supp(..)))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(AlgebraExpr::size)
            .sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(AlgebraExpr::depth)
            .max()
            .unwrap_or(0)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cur = Cursor::new(text)?;
        let e = parse_expr(&mut cur)?;
        cur.finish()?;
        Ok(e)
    }
}

impl std::str::FromStr for AlgebraExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AlgebraExpr::parse(s)
    }
}

fn parse_expr(cur: &mut Cursor) -> Result<AlgebraExpr> {
    let name = cur.ident("a relation name or operator")?;
    let binary: Option<fn(AlgebraExpr, AlgebraExpr) -> AlgebraExpr> = match name.as_str() {
        "union" => Some(AlgebraExpr::union),
        "diff" => Some(AlgebraExpr::diff),
        "times" => Some(AlgebraExpr::product),
        "div" => Some(AlgebraExpr::div),
        _ => None,
    };
    let opens = cur.peek() == Some(&Tok::LParen);
    if let (Some(build), true) = (binary, opens) {
        cur.expect(Tok::LParen, "`(`")?;
        let a = parse_expr(cur)?;
        cur.expect(Tok::Comma, "`,`")?;
        let b = parse_expr(cur)?;
        cur.expect(Tok::RParen, "`)`")?;
        return Ok(build(a, b));
    }
    match name.as_str() {
        "supp" if opens => {
            let e = parse_parenthesized(cur)?;
            Ok(AlgebraExpr::supp(e))
        }
        "proj" if cur.peek() == Some(&Tok::LBracket) => {
            cur.next();
            let mut v = Vec::new();
            if cur.peek() != Some(&Tok::RBracket) {
                v.push(cur.num()?);
                while cur.peek() == Some(&Tok::Comma) {
                    cur.next();
                    v.push(cur.num()?);
                }
            }
            cur.expect(Tok::RBracket, "`]`")?;
            let e = parse_parenthesized(cur)?;
            Ok(AlgebraExpr::project(v, e))
        }
        "select" if cur.peek() == Some(&Tok::LBracket) => {
            cur.next();
            let cond = parse_cond(cur)?;
            cur.expect(Tok::RBracket, "`]`")?;
            let e = parse_parenthesized(cur)?;
            Ok(AlgebraExpr::select(cond, e))
        }
        _ => Ok(AlgebraExpr::Rel(name)),
    }
}

fn parse_parenthesized(cur: &mut Cursor) -> Result<AlgebraExpr> {
    cur.expect(Tok::LParen, "`(`")?;
    let e = parse_expr(cur)?;
    cur.expect(Tok::RParen, "`)`")?;
    Ok(e)
}

pub(crate) fn parse_cond(cur: &mut Cursor) -> Result<Condition> {
    let mut c = parse_conj(cur)?;
    while cur.is_keyword("or") {
        cur.next();
        c = Condition::or(c, parse_conj(cur)?);
    }
    Ok(c)
}

fn parse_conj(cur: &mut Cursor) -> Result<Condition> {
    let mut c = parse_test(cur)?;
    while cur.is_keyword("and") {
        cur.next();
        c = Condition::and(c, parse_test(cur)?);
    }
    Ok(c)
}

fn parse_test(cur: &mut Cursor) -> Result<Condition> {
    if cur.peek() == Some(&Tok::LParen) {
        cur.next();
        let c = parse_cond(cur)?;
        cur.expect(Tok::RParen, "`)`")?;
        return Ok(c);
    }
    cur.expect(Tok::Hash, "`#` or `(`")?;
    let i = cur.num()?;
    let eq = match cur.next() {
        Some(Tok::Eq) => true,
        Some(Tok::Neq) => false,
        _ => return Err(Error::syntax(cur.pos(), "expected `=` or `!=`")),
    };
    cur.expect(Tok::Hash, "`#`")?;
    let j = cur.num()?;
    Ok(if eq {
        Condition::Eq(i, j)
    } else {
        Condition::Neq(i, j)
    })
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |c: &Condition| match c {
            Condition::Eq(..) | Condition::Neq(..) => c.to_string(),
            _ => format!("({c})"),
        };
        match self {
            Condition::Eq(i, j) => write!(f, "#{i}=#{j}"),
            Condition::Neq(i, j) => write!(f, "#{i}!=#{j}"),
            Condition::And(a, b) => write!(f, "{} and {}", child(a), child(b)),
            Condition::Or(a, b) => write!(f, "{} or {}", child(a), child(b)),
        }
    }
}

impl fmt::Display for AlgebraExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraExpr::Rel(n) => f.write_str(n),
            AlgebraExpr::Union(a, b) => write!(f, "union({a}, {b})"),
            AlgebraExpr::Diff(a, b) => write!(f, "diff({a}, {b})"),
            AlgebraExpr::Product(a, b) => write!(f, "times({a}, {b})"),
            AlgebraExpr::Div(a, b) => write!(f, "div({a}, {b})"),
            AlgebraExpr::Supp(e) => write!(f, "supp({e})"),
            AlgebraExpr::Project(v, e) => {
                let cols: Vec<String> = v.iter().map(usize::to_string).collect();
                write!(f, "proj[{}]({e})", cols.join(","))
            }
            AlgebraExpr::Select(c, e) => write!(f, "select[{c}]({e})"),
        }
    }
}
