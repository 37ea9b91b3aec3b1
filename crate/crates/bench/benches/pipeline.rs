use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use vlasov_bench::{landau_ensemble, landau_kernel};
use vlasov_core::dynamics::step;
use vlasov_core::{
    CaseKind, DirectInterpolant, FieldBuilder, IntegratorConfig, PhasePoint, PiecewiseInterpolant, Pipeline,
    PoissonSolver, RunConfig, Scheme, SplineSpace,
};

fn kernels(c: &mut Criterion) {
    let spec = landau_kernel();
    let (a, b) = (PhasePoint::new(1.0, 0.5), PhasePoint::new(3.5, -1.0));
    c.bench_function("kernel/eval_tensor", |bench| {
        bench.iter(|| spec.eval_tensor(black_box(a), black_box(b)))
    });
    c.bench_function("kernel/clipped_v_integral", |bench| {
        bench.iter(|| spec.clipped_v_integral(black_box(0.3), black_box(-1.0), black_box(2.0)))
    });
}

fn interpolation(c: &mut Criterion) {
    let spec = landau_kernel();
    let mut group = c.benchmark_group("direct_fit");
    group.sample_size(10);
    for n in [16, 24] {
        let ens = landau_ensemble(n);
        group.bench_with_input(BenchmarkId::from_parameter(n * n), &ens, |bench, ens| {
            bench.iter(|| DirectInterpolant::fit(ens, spec, 1e-5).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("piecewise_build");
    group.sample_size(10);
    for n in [64, 128] {
        let ens = landau_ensemble(n);
        group.bench_with_input(BenchmarkId::from_parameter(n * n), &ens, |bench, ens| {
            bench.iter(|| PiecewiseInterpolant::build(ens, 200, spec, 1e-5).unwrap())
        });
    }
    group.finish();
}

fn density_and_field(c: &mut Criterion) {
    let spec = landau_kernel();
    let ens = landau_ensemble(128);
    let pw = PiecewiseInterpolant::build(&ens, 200, spec, 1e-5).unwrap();
    let config = RunConfig::defaults(CaseKind::WeakLandau);
    let solver = PoissonSolver::new(SplineSpace::new(config.poisson_cells, config.case.params.length).unwrap());
    let points = solver.quadrature_points().to_vec();
    c.bench_function("density/integrate_density_128x128", |bench| {
        bench.iter(|| pw.integrate_density(black_box(&points)))
    });
    let density = pw.integrate_density(&points);
    c.bench_function("field/poisson_solve_256", |bench| {
        bench.iter(|| solver.solve(black_box(&density)).unwrap())
    });
}

fn time_step(c: &mut Criterion) {
    let mut config = RunConfig::defaults(CaseKind::WeakLandau);
    (config.nx, config.nv) = (64, 64);
    let pipeline = Pipeline::from_config(&config).unwrap();
    let ens = landau_ensemble(64);
    let mut group = c.benchmark_group("step_64x64");
    group.sample_size(10);
    for scheme in [Scheme::SymplecticEuler, Scheme::Rk4] {
        let integrator = IntegratorConfig { scheme, dt: 0.0625 };
        group.bench_function(scheme.name(), |bench| {
            bench.iter(|| step(&ens, &pipeline, integrator).unwrap())
        });
    }
    group.bench_function("field_build", |bench| bench.iter(|| pipeline.build(&ens).unwrap()));
    group.finish();
}

criterion_group!(benches, kernels, interpolation, density_and_field, time_step);
criterion_main!(benches);
