use criterion::{black_box, criterion_group, criterion_main, Criterion};
use dioph_core::casework::{Case, CaseConfig, PsiSpec};
use dioph_core::experiments::{best_approx, measure_case, RunOptions, Target};
use dioph_core::realroots::{real_roots, solve_abs_lt};
use dioph_core::{AlgebraicEndpoint, IntPoly, Interval, Rational};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn roots(c: &mut Criterion) {
    // (x - 1)(x - 2)(x - 3) and x^4 - 10x^2 + 1
    let p = IntPoly::from_i64s(&[-6, 11, -6, 1]);
    let quartic = IntPoly::from_i64s(&[1, 0, -10, 0, 1]);
    c.bench_function("real_roots cubic", |b| b.iter(|| real_roots(black_box(&p)).unwrap()));
    c.bench_function("real_roots quartic", |b| b.iter(|| real_roots(black_box(&quartic)).unwrap()));
}

fn solve(c: &mut Criterion) {
    let p = IntPoly::from_i64s(&[-7, 3, 5, -2]);
    let i = Interval::closed_ratio((1, 4), (3, 1));
    let theta = q(1, 64);
    c.bench_function("solve_abs_lt cubic", |b| b.iter(|| solve_abs_lt(black_box(&p), &theta, &i).unwrap()));
}

fn measure(c: &mut Criterion) {
    let cfg = CaseConfig::new(2, q(1, 10), Interval::closed_ratio((1, 1), (2, 1)), PsiSpec::pow(3), q(1, 1_000_000_000))
        .unwrap();
    let serial = RunOptions::with_workers(1);
    let parallel = RunOptions::default();
    let mut g = c.benchmark_group("measure_case big n=2 H=8");
    g.sample_size(10);
    g.bench_function("1 worker", |b| b.iter(|| measure_case(&cfg, Case::Big, 8, &serial).unwrap()));
    g.bench_function("all workers", |b| b.iter(|| measure_case(&cfg, Case::Big, 8, &parallel).unwrap()));
    g.finish();
}

fn approx(c: &mut Criterion) {
    let x = Target::Algebraic(AlgebraicEndpoint::new(IntPoly::from_i64s(&[-2, 0, 0, 1]), 5.into(), 6.into(), 2).unwrap());
    let opts = RunOptions::default();
    let mut g = c.benchmark_group("best_approx cbrt2");
    g.sample_size(10);
    g.bench_function("n=2 H=30", |b| b.iter(|| best_approx(&x, 2, 30, &opts).unwrap()));
    g.finish();
}

criterion_group!(benches, roots, solve, measure, approx);
criterion_main!(benches);
