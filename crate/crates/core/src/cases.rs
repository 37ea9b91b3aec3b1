//! Initial conditions of the standard benchmarks and particle sampling.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::particles::{Domain, ParticleEnsemble, PhasePoint};

const INV_SQRT_TAU: f64 = 0.398_942_280_401_432_7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseKind {
    WeakLandau,
    TwoStream,
    BumpOnTail,
    /// Landau initial data advected with the field forced to zero.
    FreeStreaming,
}

impl CaseKind {
    pub const ALL: [CaseKind; 4] = [
        CaseKind::WeakLandau,
        CaseKind::TwoStream,
        CaseKind::BumpOnTail,
        CaseKind::FreeStreaming,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseKind::WeakLandau => "weak_landau",
            CaseKind::TwoStream => "two_stream",
            CaseKind::BumpOnTail => "bump_on_tail",
            CaseKind::FreeStreaming => "free_streaming",
        }
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseKind::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            format!("unknown case '{s}' (expected weak_landau, two_stream, bump_on_tail or free_streaming)")
        })
    }
}

/// Physical parameters of a benchmark. Unused fields are ignored by cases
/// that do not need them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseParams {
    pub alpha: f64,
    pub k: f64,
    pub length: f64,
    pub v_max: f64,
    pub n_p: f64,
    pub n_b: f64,
    pub v_b: f64,
    pub v_t: f64,
}

impl CaseParams {
    pub fn defaults(kind: CaseKind) -> Self {
        let bump = (0.9, 0.2, 4.5, 0.5);
        let (alpha, k, v_max) = match kind {
            CaseKind::WeakLandau | CaseKind::FreeStreaming => (0.01, 0.5, 6.0),
            CaseKind::TwoStream => (0.01, 0.5, 8.0),
            CaseKind::BumpOnTail => (0.04, 0.3, 10.0),
        };
        Self {
            alpha,
            k,
            length: TAU / k,
            v_max,
            n_p: bump.0,
            n_b: bump.1,
            v_b: bump.2,
            v_t: bump.3,
        }
    }
}

/// A benchmark: which initial condition, with which parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkCase {
    pub kind: CaseKind,
    pub params: CaseParams,
}

impl BenchmarkCase {
    pub fn new(kind: CaseKind) -> Self {
        Self {
            kind,
            params: CaseParams::defaults(kind),
        }
    }

    pub fn domain(&self) -> Domain {
        Domain::new(self.params.length, self.params.v_max)
    }

    /// `f₀(x, v)`.
    pub fn initial_value(&self, x: f64, v: f64) -> f64 {
        let p = &self.params;
        let perturbation = 1.0 + p.alpha * (p.k * x).cos();
        let velocity = match self.kind {
            CaseKind::WeakLandau | CaseKind::FreeStreaming => maxwellian(v),
            CaseKind::TwoStream => v * v * maxwellian(v),
            CaseKind::BumpOnTail => {
                let beam = (v - p.v_b) / p.v_t;
                INV_SQRT_TAU * (p.n_p * (-0.5 * v * v).exp() + p.n_b * (-0.5 * beam * beam).exp())
            }
        };
        velocity * perturbation
    }

    /// Exact solution of the field-free transport, `f₀(x - v t, v)`.
    pub fn free_streaming_solution(&self, t: f64, x: f64, v: f64) -> f64 {
        self.initial_value(x - v * t, v)
    }
}

/// `f_M(v) = e^{-v²/2} / √(2π)`.
pub fn maxwellian(v: f64) -> f64 {
    INV_SQRT_TAU * (-0.5 * v * v).exp()
}

/// Cell-centered Cartesian sampling of `[0, L) × [-v_max, v_max]` with
/// `nx × nv` particles, x-major.
///
/// # Panics
///
/// Panics if either count is below 2.
pub fn sample_particles(case: &BenchmarkCase, nx: usize, nv: usize) -> ParticleEnsemble {
    assert!(
        nx >= 2 && nv >= 2,
        "need at least 2 cells per direction, got {nx} x {nv}"
    );
    let domain = case.domain();
    let (hx, hv) = cell_sizes(domain, nx, nv);
    let mut positions = Vec::with_capacity(nx * nv);
    let mut values = Vec::with_capacity(nx * nv);
    for i in 0..nx {
        let x = (i as f64 + 0.5) * hx;
        for j in 0..nv {
            let v = -domain.v_max + (j as f64 + 0.5) * hv;
            positions.push(PhasePoint::new(x, v));
            values.push(case.initial_value(x, v));
        }
    }
    ParticleEnsemble::new(positions, values, domain)
}

/// `(h_x, h_v) = (L / nx, 2 v_max / nv)`.
pub fn cell_sizes(domain: Domain, nx: usize, nv: usize) -> (f64, f64) {
    (domain.length / nx as f64, 2.0 * domain.v_max / nv as f64)
}

/// Particle spacing `h = max(h_x, h_v)`.
pub fn spacing(domain: Domain, nx: usize, nv: usize) -> f64 {
    let (hx, hv) = cell_sizes(domain, nx, nv);
    hx.max(hv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn initial_value_examples() {
        let landau = BenchmarkCase::new(CaseKind::WeakLandau);
        let expected = 1.01 / (2.0 * PI).sqrt();
        assert!((landau.initial_value(0.0, 0.0) - expected).abs() < 1e-15);
        assert!((expected - 0.402_932).abs() < 1e-6);

        let two = BenchmarkCase::new(CaseKind::TwoStream);
        for x in [0.0, 1.0, 7.5] {
            assert_eq!(two.initial_value(x, 0.0), 0.0);
        }

        let bump = BenchmarkCase::new(CaseKind::BumpOnTail);
        let expected = (0.9 * (-10.125f64).exp() + 0.2) * 1.04 / (2.0 * PI).sqrt();
        assert!((bump.initial_value(0.0, 4.5) - expected).abs() < 1e-15);
    }

    #[test]
    fn defaults() {
        let bump = CaseParams::defaults(CaseKind::BumpOnTail);
        assert!((bump.length - TAU / 0.3).abs() < 1e-14);
        assert_eq!((bump.k, bump.alpha, bump.v_max), (0.3, 0.04, 10.0));
        let landau = CaseParams::defaults(CaseKind::WeakLandau);
        assert!((landau.length - 4.0 * PI).abs() < 1e-14);
        assert_eq!(CaseParams::defaults(CaseKind::TwoStream).v_max, 8.0);
    }

    #[test]
    fn sampling_cell_centers() {
        let case = BenchmarkCase::new(CaseKind::WeakLandau);
        let (l, vm) = (case.params.length, case.params.v_max);
        let e = sample_particles(&case, 2, 2);
        let got: Vec<_> = e.positions().to_vec();
        let want = [
            PhasePoint::new(l / 4.0, -vm / 2.0),
            PhasePoint::new(l / 4.0, vm / 2.0),
            PhasePoint::new(3.0 * l / 4.0, -vm / 2.0),
            PhasePoint::new(3.0 * l / 4.0, vm / 2.0),
        ];
        for (g, w) in got.iter().zip(want) {
            assert!((g.x - w.x).abs() < 1e-14 && (g.v - w.v).abs() < 1e-14);
        }
    }

    #[test]
    fn sampled_mass_is_normalized() {
        for kind in CaseKind::ALL {
            let case = BenchmarkCase::new(kind);
            let e = sample_particles(&case, 64, 64);
            let (hx, hv) = cell_sizes(case.domain(), 64, 64);
            assert!(e.values().iter().all(|&f| f >= 0.0));
            let mass = hx * hv * e.values().iter().sum::<f64>() / case.params.length;
            let expected = match kind {
                // n_p + n_b does not integrate to one; the benchmark keeps it as is
                CaseKind::BumpOnTail => case.params.n_p + case.params.n_b * case.params.v_t,
                _ => 1.0,
            };
            assert!((mass - expected).abs() < 1e-3, "{kind}: {mass}");
        }
    }

    #[test]
    fn case_names_round_trip() {
        for kind in CaseKind::ALL {
            assert_eq!(kind.name().parse::<CaseKind>().unwrap(), kind);
        }
        assert!("landau".parse::<CaseKind>().is_err());
    }
}
