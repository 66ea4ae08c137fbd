use std::hint::black_box;

use assocf::magma::{search_laws, CheckOptions};
use assocf::rewrite::{derivability_class, derivable, VarietyPresentation};
use assocf::thompson::generators;
use assocf::{zoo, Law, Tree};
use criterion::{criterion_group, criterion_main, Criterion};

fn law_search(c: &mut Criterion) {
    let opts = CheckOptions::default();
    let pre = zoo::pre_sl2();
    let s4 = zoo::s4_example();
    let a5 = zoo::a5_commutator();

    let mut group = c.benchmark_group("search_laws");
    group.sample_size(10);
    group.bench_function("pre_sl2_n5", |b| {
        b.iter(|| search_laws(black_box(&pre), 5, &opts).unwrap())
    });
    group.bench_function("s4_n4", |b| {
        b.iter(|| search_laws(black_box(&s4), 4, &opts).unwrap())
    });
    group.bench_function("a5_n3", |b| {
        b.iter(|| search_laws(black_box(&a5), 3, &opts).unwrap())
    });
    group.finish();
}

fn derivation(c: &mut Criterion) {
    let x1 = VarietyPresentation::of_elements([&generators().x1]);
    let assoc = VarietyPresentation::new(vec![Law::associative()]);
    let r: Tree = "((. .) (. .))".parse().unwrap();
    let (r1, r2) = (r.expand(4).unwrap(), r.expand(2).unwrap());
    let (p6, q6) = (r1.expand(3).unwrap(), r2.expand(3).unwrap());

    c.bench_function("derivable_x1_n6", |b| {
        b.iter(|| derivable(black_box(&p6), black_box(&q6), &x1).unwrap())
    });
    c.bench_function("assoc_class_n8", |b| {
        b.iter(|| derivability_class(black_box(&Tree::right_comb(8)), &assoc))
    });
}

criterion_group!(benches, law_search, derivation);
criterion_main!(benches);
