use std::convert::Infallible;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lubbock_core::bernoulli::{gen_bernoulli, DegreeVector};
use lubbock_core::exactmath::{int, rat, to_f64, PolyM, Rational};
use lubbock_core::lubbock::{coeff_at, cross_check, table, Route};
use lubbock_core::operators::{d_of_central, generic_y, DeltaOperator, Family};
use lubbock_core::summation::{lubbock_sum, sample, SummationRequest, Variant};

fn tables(c: &mut Criterion) {
    let mut g = c.benchmark_group("q_table");
    for max in [8u32, 12, 16] {
        g.bench_with_input(BenchmarkId::new("bernoulli", max), &max, |b, &max| b.iter(|| table(Family::Q, max, Route::Bernoulli)));
        g.bench_with_input(BenchmarkId::new("series", max), &max, |b, &max| b.iter(|| table(Family::Q, max, Route::Series)));
    }
    g.finish();

    c.bench_function("cross_check_12", |b| b.iter(|| cross_check(12, &[1, 2, 3, 4])));
    c.bench_function("coeff_at_lambda_8", |b| b.iter(|| coeff_at(Family::Lambda, 8, black_box(&rat(1, 10)))));
}

fn bernoulli(c: &mut Criterion) {
    let mut g = c.benchmark_group("gen_bernoulli_barnes");
    for nu in [4u32, 8, 12] {
        let omega = DegreeVector::barnes(nu as usize + 1);
        g.bench_with_input(BenchmarkId::from_parameter(nu), &nu, |b, &nu| {
            b.iter(|| gen_bernoulli(nu as usize + 1, nu, &PolyM::constant(int(1)), &omega))
        });
    }
    g.finish();
}

fn series(c: &mut Criterion) {
    c.bench_function("d_of_central_16", |b| b.iter(|| d_of_central(black_box(16))));
    let phi = DeltaOperator::steffensen(&rat(1, 2), &int(1), 9).unwrap();
    c.bench_function("generic_y_steffensen_8", |b| b.iter(|| generic_y(&phi, 8)));
}

fn summation(c: &mut Criterion) {
    let f = |x: &Rational| Ok::<_, Infallible>((-to_f64(x) / 10.0).exp());
    let mut g = c.benchmark_group("summation_exp");
    for variant in [Variant::Forward, Variant::Central] {
        let samples = sample(f, &int(0), variant, 50, 6).unwrap();
        let req = SummationRequest { samples, n: 50, h: 10, order: 6, variant };
        g.bench_function(format!("{variant:?}"), |b| b.iter(|| lubbock_sum(black_box(&req))));
    }
    g.finish();
}

criterion_group!(benches, tables, bernoulli, series, summation);
criterion_main!(benches);
