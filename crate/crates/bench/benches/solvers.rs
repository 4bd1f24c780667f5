use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use pinch_bench::reference_instance;
use pinch_core::baselines::noma_exhaustive_solution;
use pinch_core::geometry::placement_objective;
use pinch_core::power::{allocate_at_position, greedy_residual_allocation, min_powers};
use pinch_core::pso::{pso_minimize_seeded, search_bounds, PsoConfig};
use pinch_core::qos::{solve_no_qos, solve_with_qos};
use pinch_core::rate::{noma_rates, noma_sum_rate_closed_form};

fn bench_rate_model(c: &mut Criterion) {
    let powers: Vec<f64> = (1..=10).map(|k| 0.1 * k as f64).collect();
    let channels: Vec<f64> = (1..=10).map(|k| 1000.0 / k as f64).collect();
    c.bench_function("noma_rates_10_users", |b| {
        b.iter(|| noma_rates(black_box(&powers), black_box(&channels)))
    });
    c.bench_function("closed_form_sum_rate_10_users", |b| {
        b.iter(|| noma_sum_rate_closed_form(black_box(&powers), black_box(&channels)))
    });
}

fn bench_power_allocation(c: &mut Criterion) {
    let channels = [9.0, 3.0, 1.0];
    let r_min = [1.2, 0.8, 0.6];
    let p_max = [2.0, 2.0, 2.0];
    c.bench_function("min_powers_3_users", |b| {
        b.iter(|| min_powers(black_box(&channels), black_box(&r_min)))
    });
    c.bench_function("greedy_allocation_3_users", |b| {
        b.iter(|| {
            greedy_residual_allocation(black_box(&channels), black_box(&r_min), black_box(&p_max))
        })
    });
    let (params, dep) = reference_instance(11, 0.5);
    c.bench_function("allocate_at_position", |b| {
        b.iter(|| allocate_at_position(black_box(&dep), black_box(30.0), black_box(&params)))
    });
}

fn bench_placement(c: &mut Criterion) {
    let (params, dep) = reference_instance(11, 0.0);
    let powers = dep.p_max().to_vec();
    let bounds = search_bounds(&dep, params.waveguide_len);
    c.bench_function("swarm_placement_no_floors", |b| {
        b.iter(|| {
            pso_minimize_seeded(
                |x| -placement_objective(&dep, &powers, x, &params),
                bounds,
                &PsoConfig::default().with_seed(3),
                black_box(&[]),
            )
        })
    });
    c.bench_function("solve_no_qos", |b| {
        b.iter(|| solve_no_qos(black_box(&dep), &params, &PsoConfig::default()))
    });
}

fn bench_joint_solvers(c: &mut Criterion) {
    let (params, dep) = reference_instance(11, 0.5);
    c.bench_function("solve_with_qos", |b| {
        b.iter(|| solve_with_qos(black_box(&dep), &params, &PsoConfig::default()))
    });
    let mut group = c.benchmark_group("grid");
    group.sample_size(20);
    group.bench_function("noma_exhaustive_1mm_grid", |b| {
        b.iter(|| noma_exhaustive_solution(black_box(&dep), &params, 1e-3))
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_rate_model,
    bench_power_allocation,
    bench_placement,
    bench_joint_solvers
);
criterion_main!(benches);
