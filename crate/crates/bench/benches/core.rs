// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use coinv_bench::shift_inputs;
use coinv_core::pipelines::simplified_shift_with;
use coinv_core::qpoly::{q_binomial, q_multinomial};
use coinv_core::trace::Tracer;
use coinv_core::words::{classify, gf, Class, Freqs};
use criterion::{criterion_group, criterion_main, Criterion};

fn polynomials(c: &mut Criterion) {
    c.bench_function("q_binomial(30, 15)", |b| {
        b.iter(|| q_binomial(black_box(30), black_box(15)).unwrap())
    });
    c.bench_function("q_multinomial(20; 5,5,5,5)", |b| {
        b.iter(|| q_multinomial(black_box(20), black_box(&[5, 5, 5, 5])).unwrap())
    });
}

fn enumeration(c: &mut Criterion) {
    let freqs = Freqs::from_pairs(&[(1, 3), (2, 3), (3, 3), (4, 2)]);
    c.bench_function("gf R(1^3 2^3 3^3 4^2)", |b| {
        b.iter(|| gf(black_box(&freqs), |_| true).unwrap())
    });
}

fn shift(c: &mut Criterion) {
    let words: Vec<_> = shift_inputs()
        .into_iter()
        .filter(|w| classify(w, 4) == Class::Greater)
        .collect();
    c.bench_function("simplified shift over W_2^>", |b| {
        b.iter(|| {
            for w in &words {
                black_box(simplified_shift_with(w, 4, &mut Tracer::off()).unwrap());
            }
        })
    });
}

criterion_group!(benches, polynomials, enumeration, shift);
criterion_main!(benches);
