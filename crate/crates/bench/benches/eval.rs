use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use krel::experiments::{bag_division_witness, witness_database};
use krel::transpile::{algebra_to_calculus, calculus_to_algebra};
use krel::{AlgebraExpr, KStructure, Semiring};
use krel_bench::workload;

fn division(c: &mut Criterion) {
    let mut group = c.benchmark_group("division_witness");
    for n in [4, 16, 30] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| bag_division_witness(black_box(n)).unwrap())
        });
    }
    group.finish();

    let db = witness_database(30);
    let e = AlgebraExpr::parse("div(R, S)").unwrap();
    c.bench_function("div_eval_n30", |b| {
        b.iter(|| e.eval(black_box(&db)).unwrap())
    });
}

fn evaluation(c: &mut Criterion) {
    let mut group = c.benchmark_group("eval");
    for k in [Semiring::Bag, Semiring::Fuzzy, Semiring::Provenance] {
        let w = workload(k, 4, 32, 11);
        group.bench_function(BenchmarkId::new("algebra", k), |b| {
            b.iter(|| {
                for e in &w.exprs {
                    black_box(e.eval(&w.db).unwrap());
                }
            })
        });
        let a = KStructure::from_database(&w.db).unwrap();
        group.bench_function(BenchmarkId::new("calculus", k), |b| {
            b.iter(|| {
                for f in &w.formulas {
                    black_box(f.relation_of(&a).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn translation(c: &mut Criterion) {
    let w = workload(Semiring::Bag, 5, 32, 23);
    c.bench_function("translate_a2c", |b| {
        b.iter(|| {
            for e in &w.exprs {
                black_box(algebra_to_calculus(e, &w.schema).unwrap());
            }
        })
    });
    c.bench_function("translate_c2a", |b| {
        b.iter(|| {
            for f in &w.formulas {
                black_box(calculus_to_algebra(f, &w.schema).unwrap());
            }
        })
    });
}

criterion_group!(benches, division, evaluation, translation);
criterion_main!(benches);
