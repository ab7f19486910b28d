//! Relational algebra and relational calculus over semirings with monus
//! and support.
//!
//! Relations are annotated with values of a commutative semiring: sets with
//! booleans, bags with naturals, provenance with polynomials, and so on. The
//! crate evaluates algebra expressions and calculus formulas over such
//! relations and translates between the two languages.

pub mod algebra;
pub mod calculus;
pub mod error;
pub mod experiments;
pub mod harness;
mod lexer;
pub mod relation;
pub mod semiring;
pub mod transpile;

pub use algebra::AlgebraExpr;
pub use calculus::{Assignment, Formula, Var};
pub use error::{Error, Result};
pub use relation::{Condition, Elem, KDatabase, KRelation, KStructure, Schema, Tuple};
pub use semiring::{Level, Semiring, SemiringDescriptor, Value};
pub use transpile::{Capability, Translation};
