use std::hint::black_box;

use criterion::{BenchmarkId, Criterion};
use geocrystal::geocrystal::{verify_axioms, Checker};
use geocrystal::kashiwara::{enumerate_b_lambda, normality_check, tropicalize};
use geocrystal::ratfun::parse_ratfun;
use geocrystal::unipotent::{build_crystal, invert_chart, theta};
use geocrystal::VarContext;

pub fn benchmarks(c: &mut Criterion) {
    ratfun(c);
    crystals(c);
    tropical(c);
}

fn ratfun(c: &mut Criterion) {
    let ctx = VarContext::new(&["x", "y", "z"]).unwrap();
    let f = parse_ratfun("(x + y)^3/(x*z + y) + z^2/(x + 1)", &ctx).unwrap();
    let g = parse_ratfun("(y + z)^2/(x + y*z)", &ctx).unwrap();
    c.bench_function("ratfun/mul_add", |b| {
        b.iter(|| black_box(&f).mul(black_box(&g)).add(&f))
    });
    let h = f.mul(&g).div(&g).unwrap();
    c.bench_function("ratfun/equals", |b| {
        b.iter(|| black_box(&h).equals(black_box(&f)))
    });
}

fn crystals(c: &mut Criterion) {
    let mut group = c.benchmark_group("crystal");
    group.sample_size(20);
    for (n, word) in [(3, vec![1, 2, 1]), (4, vec![1, 2, 1, 3, 2, 1])] {
        group.bench_with_input(BenchmarkId::new("build", n), &word, |b, w| {
            b.iter(|| build_crystal(w, n).unwrap())
        });
        let (_, th) = theta(&word, n).unwrap();
        group.bench_with_input(BenchmarkId::new("invert_chart", n), &word, |b, w| {
            b.iter(|| invert_chart(w, &th).unwrap())
        });
    }
    let x = build_crystal(&[1, 2, 1], 3).unwrap();
    group.bench_function("verify_axioms/3", |b| {
        b.iter(|| verify_axioms(&x, &Checker::default()))
    });
    group.finish();
}

fn tropical(c: &mut Criterion) {
    let t3 = tropicalize(&build_crystal(&[1, 2, 1], 3).unwrap()).unwrap();
    let t4 = tropicalize(&build_crystal(&[1, 2, 1, 3, 2, 1], 4).unwrap()).unwrap();
    let p = [5, 2, -1, 1, 3, 2];
    c.bench_function("trop/f_oracle/3", |b| {
        b.iter(|| t3.f_at(black_box(&p)).unwrap())
    });
    let closed = t3.f_map().closed_only().unwrap();
    c.bench_function("trop/f_closed/3", |b| {
        b.iter(|| closed.eval(black_box(&p)).unwrap())
    });
    let mut group = c.benchmark_group("enumerate");
    group.sample_size(10);
    group.bench_function("gl3/(4,2,0)", |b| {
        b.iter(|| enumerate_b_lambda(&t3, &[4, 2, 0]).unwrap())
    });
    group.bench_function("gl4/(2,1,0,0)", |b| {
        b.iter(|| enumerate_b_lambda(&t4, &[2, 1, 0, 0]).unwrap())
    });
    let g = enumerate_b_lambda(&t3, &[4, 2, 0]).unwrap();
    group.bench_function("normality/gl3/(4,2,0)", |b| {
        b.iter(|| normality_check(&g, &t3, 2).unwrap())
    });
    group.finish();
}
