//! Shared fixtures for the benchmarks.

use krel::harness::{default_schema, gen_algebra_expr, gen_database, gen_formula, GenConfig};
use krel::{AlgebraExpr, Formula, KDatabase, Schema, Semiring};

/// A seeded workload: one database with queries in both languages.
pub struct Workload {
    pub schema: Schema,
    pub db: KDatabase,
    pub exprs: Vec<AlgebraExpr>,
    pub formulas: Vec<Formula>,
}

/// `count` random queries of depth at most `depth` over one random
/// database of instance `k`.
pub fn workload(k: Semiring, depth: usize, count: usize, seed: u64) -> Workload {
    let schema = default_schema();
    let mut cfg = GenConfig::new(k, seed);
    cfg.max_depth = depth;
    let db = gen_database(&cfg, &schema);
    let exprs = (0..count as u64)
        .map(|i| gen_algebra_expr(&cfg.with_seed(seed + i), &schema))
        .collect();
    let formulas = (0..count as u64)
        .map(|i| gen_formula(&cfg.with_seed(seed + i), &schema))
        .collect();
    Workload {
        schema,
        db,
        exprs,
        formulas,
    }
}
