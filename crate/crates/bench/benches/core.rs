use std::hint::black_box;

use attrib_core::game::{self, Schedule};
use attrib_core::growth::{brute_force_count, fit_log_linear, n_bound};
use attrib_core::lang::build_unary_nested_family;
use attrib_core::problang::{classifier_accuracy, ProbLanguage};
use attrib_core::telltale::{construct_telltales, make_finite_class_learner};
use attrib_core::{Alphabet, Dfa, Language};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn counting(c: &mut Criterion) {
    let mut g = c.benchmark_group("n_bound");
    g.bench_function("closed_form_k3", |b| {
        b.iter(|| n_bound(black_box(300), black_box(400), black_box(110), 3))
    });
    for d in [6u64, 10, 14] {
        g.bench_with_input(BenchmarkId::new("brute_force_k3", d), &d, |b, &d| {
            b.iter(|| brute_force_count(3, 4, black_box(d), 3))
        });
    }
    g.finish();
}

/// Strings over {a, b} whose length is divisible by `m`.
fn mod_length(alphabet: &Alphabet, m: usize) -> Language {
    let transitions = (0..m).map(|s| vec![(s + 1) % m, (s + 1) % m]).collect();
    Language::regular(alphabet.clone(), Dfa::new(0, [0], transitions, 2).unwrap()).unwrap()
}

fn subset(c: &mut Criterion) {
    let alphabet = Alphabet::new(['a', 'b']).unwrap();
    let mut g = c.benchmark_group("difference_witness");
    for (m, n) in [(6, 4), (30, 20), (210, 35)] {
        let (l, r) = (mod_length(&alphabet, m), mod_length(&alphabet, n));
        g.bench_with_input(BenchmarkId::from_parameter(format!("{m}x{n}")), &(l, r), |b, (l, r)| {
            b.iter(|| l.difference_witness(r).unwrap())
        });
    }
    g.finish();
}

fn telltales(c: &mut Criterion) {
    let mut g = c.benchmark_group("construct_telltales");
    for k in [10usize, 50, 200] {
        let family = build_unary_nested_family(k).unwrap();
        g.bench_with_input(BenchmarkId::new("nested", k), &family, |b, f| {
            b.iter(|| construct_telltales(f).unwrap())
        });
    }
    g.finish();
}

fn simulation(c: &mut Criterion) {
    let mut g = c.benchmark_group("simulation");
    for horizon in [100usize, 1000] {
        let family = build_unary_nested_family(horizon).unwrap();
        g.bench_with_input(BenchmarkId::new("nested_adversary_min", horizon), &family, |b, f| {
            b.iter(|| {
                let mut learner = game::min_consistent_learner(f);
                game::nested_adversary(&mut learner, f, horizon).unwrap()
            })
        });
    }
    let family = build_unary_nested_family(50).unwrap();
    let tt = construct_telltales(&family).unwrap();
    let target = family.len() - 1;
    g.bench_function("fair_finite_class_50", |b| {
        b.iter(|| {
            let mut learner = make_finite_class_learner(&family, &tt);
            let mut teacher = game::fair_teacher(family.get(target).unwrap(), Schedule::LengthLex)
                .unwrap()
                .with_target(target);
            game::run_simulation(&mut teacher, &mut learner, 200).unwrap()
        })
    });
    let (p1, p2) = (ProbLanguage::p1(), ProbLanguage::p2());
    g.bench_function("likelihood_ratio_m50_100trials", |b| {
        b.iter(|| classifier_accuracy(1, &p1, &p2, 50, 100, black_box(9)).unwrap())
    });
    g.finish();
}

fn fitting(c: &mut Criterion) {
    let mut g = c.benchmark_group("fit_log_linear");
    for n in [73usize, 1000] {
        let t: Vec<f64> = (0..n).map(|i| i as f64 / 12.0).collect();
        let y: Vec<f64> = t
            .iter()
            .map(|t| 5.0 * (1.39 * t).exp() * (1.0 + 0.01 * (t * 7.0).sin()))
            .collect();
        g.bench_with_input(BenchmarkId::from_parameter(n), &(t, y), |b, (t, y)| {
            b.iter(|| fit_log_linear(t, y).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, counting, subset, telltales, simulation, fitting);
criterion_main!(benches);
