use std::hint::black_box;

use apndesigns::affine::{orbit, stabilizer_order};
use apndesigns::blocks::{apn_image_block, kasami_block, oval_block};
use apndesigns::boolfn::{char_fn, walsh_fast, walsh_naive};
use apndesigns::codes::code_from_design;
use apndesigns::designs::iso::are_isomorphic;
use apndesigns::designs::verify_t_design;
use apndesigns::FieldCtx;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn field(c: &mut Criterion) {
    let ctx = FieldCtx::new(13).unwrap();
    let xs: Vec<_> = ctx.elements().take(4096).collect();
    c.bench_function("mul_4096_n13", |b| {
        b.iter(|| xs.iter().fold(ctx.generator(), |acc, &x| ctx.mul(acc, black_box(x))))
    });
}

fn walsh(c: &mut Criterion) {
    let mut g = c.benchmark_group("walsh");
    for n in [7u32, 11] {
        let ctx = FieldCtx::new(n).unwrap();
        let f = char_fn(&kasami_block(&ctx, 1).unwrap());
        g.bench_with_input(BenchmarkId::new("fast", n), &f, |b, f| b.iter(|| walsh_fast(f)));
    }
    let ctx = FieldCtx::new(7).unwrap();
    let f = char_fn(&kasami_block(&ctx, 1).unwrap());
    g.bench_function("naive/7", |b| b.iter(|| walsh_naive(&f)));
    g.finish();
}

fn orbits(c: &mut Criterion) {
    let mut g = c.benchmark_group("orbit");
    g.sample_size(10);
    for n in [5u32, 7, 9] {
        let ctx = FieldCtx::new(n).unwrap();
        let block = kasami_block(&ctx, 1).unwrap();
        g.bench_with_input(BenchmarkId::new("develop", n), &block, |b, blk| b.iter(|| orbit(blk)));
        g.bench_with_input(BenchmarkId::new("stabilizer", n), &block, |b, blk| {
            b.iter(|| stabilizer_order(blk))
        });
    }
    g.finish();
}

fn verify(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_t3");
    g.sample_size(10);
    for n in [5u32, 7] {
        let ctx = FieldCtx::new(n).unwrap();
        let d = orbit(&oval_block(&ctx, ctx.exponent(6)).unwrap());
        g.bench_with_input(BenchmarkId::from_parameter(n), &d, |b, d| {
            b.iter(|| verify_t_design(d, 3).unwrap())
        });
    }
    g.finish();
}

fn codes(c: &mut Criterion) {
    let ctx = FieldCtx::new(5).unwrap();
    let d = orbit(&kasami_block(&ctx, 1).unwrap());
    let code = code_from_design(&d);
    let mut g = c.benchmark_group("code_n5");
    g.bench_function("span", |b| b.iter(|| code_from_design(&d)));
    g.bench_function("weight_enumerator", |b| b.iter(|| code.weight_enumerator(1 << 20).unwrap()));
    g.finish();
}

fn iso(c: &mut Criterion) {
    let ctx = FieldCtx::new(5).unwrap();
    let a = orbit(&apn_image_block(&ctx, ctx.exponent(13)).unwrap());
    let b = orbit(&oval_block(&ctx, ctx.exponent(6)).unwrap());
    let k1 = orbit(&kasami_block(&ctx, 1).unwrap());
    let mut g = c.benchmark_group("iso_n5");
    g.sample_size(10);
    g.bench_function("isomorphic_pair", |bch| bch.iter(|| are_isomorphic(&a, &b)));
    g.bench_function("nonisomorphic_pair", |bch| bch.iter(|| are_isomorphic(&a, &k1)));
    g.finish();
}

criterion_group!(benches, field, walsh, orbits, verify, codes, iso);
criterion_main!(benches);
