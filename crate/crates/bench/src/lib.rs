//! Fixtures for the benchmarks in `benches/`.

use vlasov_core::{sample_particles, BenchmarkCase, CaseKind, KernelSpec, ParticleEnsemble, RunConfig};

/// Weak Landau ensemble on an `n × n` grid.
pub fn landau_ensemble(n: usize) -> ParticleEnsemble {
    sample_particles(&BenchmarkCase::new(CaseKind::WeakLandau), n, n)
}

/// Kernel of the default Landau setup: order 2, σ = (6, 3).
pub fn landau_kernel() -> KernelSpec {
    let c = RunConfig::defaults(CaseKind::WeakLandau);
    KernelSpec::new(c.order, c.sigma_x, c.sigma_v).expect("default kernel is valid")
}
