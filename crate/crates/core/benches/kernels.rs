use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symflow::hyperbolic::{greedy_separated_set, sample};
use symflow::katok::select_good_cylinders;
use symflow::measures::{LocallyConstantFn, MarkovMeasure};
use symflow::schottky::{orbit_displacements, SchottkyGroup, DEFAULT_ORBIT_BUDGET};
use symflow::shift::words::{enumerate, DEFAULT_WORD_BUDGET};
use symflow::shift::Sft;
use symflow::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn word_enumeration(c: &mut Criterion) {
    let x = Sft::full(3).unwrap();
    let mut g = c.benchmark_group("word_enumeration_full3_n12");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| enumerate(&x, 12, None, exec, DEFAULT_WORD_BUDGET, |w| Some(w.iter().sum::<u32>())).unwrap())
        });
    }
    g.finish();
}

fn good_cylinders(c: &mut Criterion) {
    let nu = MarkovMeasure::bernoulli(&[0.3, 0.7]).unwrap();
    let tau = LocallyConstantFn::by_symbol(nu.base(), &[1.0, 2.0]).unwrap();
    let mut g = c.benchmark_group("good_cylinders_n16");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| select_good_cylinders(&nu, &tau, 0.1, 16, exec, DEFAULT_WORD_BUDGET).unwrap())
        });
    }
    g.finish();
}

fn separated_set(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pts: Vec<_> = (0..60).map(|_| sample::tangent(&mut rng, sample::Window::default())).collect();
    let mut g = c.benchmark_group("greedy_separated_60");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| greedy_separated_set(&pts, 2, 0.2, exec).unwrap())
        });
    }
    g.finish();
}

fn schottky_orbit(c: &mut Criterion) {
    let grp = SchottkyGroup::symmetric(3, 3.5).unwrap();
    let mut g = c.benchmark_group("schottky_orbit_r12");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| orbit_displacements(&grp, 12.0, DEFAULT_ORBIT_BUDGET, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().measurement_time(Duration::from_secs(3)).warm_up_time(Duration::from_secs(1));
    targets = word_enumeration, good_cylinders, separated_set, schottky_orbit
}
criterion_main!(benches);
