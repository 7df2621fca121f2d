use condcompat::exactlin::rref;
use condcompat::{build_c, build_d, classify, joint_lp, solution_space, ConditionalPair};
use condcompat_oracle::{fixtures, random_compatible_pair, random_independent_pair, InstanceSpec};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn cases() -> Vec<(String, ConditionalPair)> {
    let mut v = vec![
        ("2x2 example".to_string(), fixtures::TWO_BY_TWO_COMPATIBLE.pair()),
        ("3x3 example".to_string(), fixtures::THREE_BY_THREE_POSITIVE.pair()),
        ("3x3 grocery".to_string(), fixtures::GROCERY.pair()),
    ];
    for n in [4, 5] {
        v.push((format!("{n}x{n} compatible"), random_compatible_pair(&InstanceSpec::new(n, n, 7)).unwrap()));
        v.push((format!("{n}x{n} independent"), random_independent_pair(&InstanceSpec::new(n, n, 7)).unwrap()));
    }
    v
}

fn bench_classify(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    for (name, pair) in cases() {
        group.bench_with_input(BenchmarkId::from_parameter(&name), &pair, |b, p| b.iter(|| classify(black_box(p)).unwrap()));
    }
    group.finish();
}

fn bench_pieces(c: &mut Criterion) {
    let mut group = c.benchmark_group("pieces");
    for (name, pair) in cases() {
        let d = build_d(&pair);
        let cm = build_c(&pair);
        group.bench_with_input(BenchmarkId::new("rref D", &name), &d, |b, m| b.iter(|| rref(black_box(m))));
        group.bench_with_input(BenchmarkId::new("rref C", &name), &cm, |b, m| b.iter(|| rref(black_box(m))));
        group.bench_with_input(BenchmarkId::new("joint_lp", &name), &pair, |b, p| b.iter(|| joint_lp(black_box(p)).unwrap()));
        group.bench_with_input(BenchmarkId::new("solution_space", &name), &pair, |b, p| {
            b.iter(|| solution_space(black_box(p)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_classify, bench_pieces);
criterion_main!(benches);
