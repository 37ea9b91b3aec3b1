//! Benchmark driver: sampling, the interpolate/density/Poisson pipeline,
//! time stepping and per-step diagnostics.

use rayon::prelude::*;

use crate::cases::{cell_sizes, maxwellian, sample_particles, BenchmarkCase, CaseKind};
use crate::config::{Method, Reference, RunConfig};
use crate::direct::DirectInterpolant;
use crate::dynamics::{step, ElectricField, FieldBuilder, PhaseError, StepError};
use crate::field::{FieldError, FieldSolution, PoissonSolver, SplineSpace};
use crate::kernels::{KernelError, KernelSpec};
use crate::particles::{Domain, ParticleEnsemble, PhasePoint};
use crate::piecewise::PiecewiseInterpolant;

/// Side length of the fixed grid on which the free-streaming error is measured.
/// Odd, so that grid nodes do not line up with particle cell faces.
pub const ERROR_GRID: usize = 199;

#[derive(Debug, thiserror::Error)]
pub enum SimulationError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("step {step} (t = {t}), {source}")]
    Step {
        step: usize,
        t: f64,
        #[source]
        source: StepError,
    },
    #[error("final field at t = {t}: {source}")]
    Final {
        t: f64,
        #[source]
        source: PhaseError,
    },
}

impl SimulationError {
    /// Pipeline phase of a numerical failure, if any.
    pub fn phase(&self) -> Option<crate::dynamics::Phase> {
        match self {
            SimulationError::Step { source, .. } => Some(source.source.phase()),
            SimulationError::Final { source, .. } => Some(source.phase()),
            _ => None,
        }
    }
}

/// Either reconstruction of `f`.
#[derive(Debug, Clone)]
pub enum Interpolant {
    Direct(DirectInterpolant),
    Piecewise(PiecewiseInterpolant),
}

impl Interpolant {
    pub fn fit(
        ensemble: &ParticleEnsemble,
        method: Method,
        spec: KernelSpec,
        mu: f64,
        n_box: usize,
    ) -> Result<Self, PhaseError> {
        Ok(match method {
            Method::Direct => Interpolant::Direct(DirectInterpolant::fit(ensemble, spec, mu)?),
            Method::Piecewise => Interpolant::Piecewise(PiecewiseInterpolant::build(ensemble, n_box, spec, mu)?),
        })
    }

    pub fn evaluate(&self, z: PhasePoint) -> f64 {
        match self {
            Interpolant::Direct(d) => d.evaluate(z),
            Interpolant::Piecewise(p) => p.evaluate(z),
        }
    }

    /// `ρ(x) = 1 - ∫ f_h dv` at every `x`.
    pub fn density(&self, xs: &[f64]) -> Vec<f64> {
        match self {
            Interpolant::Direct(d) => xs.par_iter().map(|&x| 1.0 - d.integrate_v(x)).collect(),
            Interpolant::Piecewise(p) => p.integrate_density(xs),
        }
    }
}

/// Interpolant and field built from one particle snapshot.
#[derive(Debug, Clone)]
pub struct FieldState {
    pub interpolant: Interpolant,
    pub field: FieldSolution,
    /// Density samples at the Poisson quadrature points.
    pub density: Vec<f64>,
}

impl ElectricField for FieldState {
    fn field_at(&self, x: f64) -> f64 {
        self.field.electric_field(x)
    }
}

/// The full per-step pipeline: interpolate, integrate the density, solve.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub method: Method,
    pub spec: KernelSpec,
    pub mu: f64,
    pub n_box: usize,
    pub solver: PoissonSolver,
    /// Replace the field by zero (free streaming).
    pub zero_field: bool,
}

impl Pipeline {
    pub fn from_config(config: &RunConfig) -> Result<Self, SimulationError> {
        let spec = KernelSpec::new(config.order, config.sigma_x, config.sigma_v)?;
        let space = SplineSpace::new(config.poisson_cells, config.case.params.length)?;
        Ok(Self {
            method: config.method,
            spec,
            mu: config.mu,
            n_box: config.n_box,
            solver: PoissonSolver::new(space),
            zero_field: config.case.kind == CaseKind::FreeStreaming,
        })
    }
}

impl FieldBuilder for Pipeline {
    type Output = FieldState;

    fn build(&self, ensemble: &ParticleEnsemble) -> Result<FieldState, PhaseError> {
        let interpolant = Interpolant::fit(ensemble, self.method, self.spec, self.mu, self.n_box)?;
        let points = self.solver.quadrature_points();
        let density = interpolant.density(points);
        if let Some(i) = density.iter().position(|r| !r.is_finite()) {
            return Err(PhaseError::Density { x: points[i] });
        }
        let field = if self.zero_field {
            FieldSolution::zero(*self.solver.space())
        } else {
            self.solver.solve(&density)?
        };
        Ok(FieldState {
            interpolant,
            field,
            density,
        })
    }
}

/// One row of `amplitude.csv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub t: f64,
    pub e_max: f64,
    pub e_l2: f64,
    /// `(1/L) ∬ f_h`.
    pub mass: f64,
    pub f_l2: f64,
    pub kinetic_energy: f64,
    pub field_energy: f64,
}

/// `max_j |E(x_j)|` and `(h Σ E(x_j)²)^{1/2}` on `x_j = j L / G`.
pub fn amplitude(field: &impl ElectricField, length: f64, grid: usize) -> (f64, f64) {
    let h = length / grid as f64;
    let (mut max, mut sq) = (0.0f64, 0.0);
    for j in 0..grid {
        let e = field.field_at(j as f64 * h);
        max = max.max(e.abs());
        sq += e * e;
    }
    (max, (h * sq).sqrt())
}

/// Midpoint-rule moments of `f_h` on the `nx × nv` cell grid:
/// `(‖f_h‖₂, ½ ∬ v² f_h)`.
pub fn phase_space_moments(interpolant: &Interpolant, domain: Domain, nx: usize, nv: usize) -> (f64, f64) {
    let (hx, hv) = cell_sizes(domain, nx, nv);
    let columns: Vec<(f64, f64)> = (0..nx)
        .into_par_iter()
        .map(|i| {
            let x = (i as f64 + 0.5) * hx;
            let (mut sq, mut kin) = (0.0, 0.0);
            for j in 0..nv {
                let v = -domain.v_max + (j as f64 + 0.5) * hv;
                let f = interpolant.evaluate(PhasePoint::new(x, v));
                sq += f * f;
                kin += v * v * f;
            }
            (sq, kin)
        })
        .collect();
    let (sq, kin) = columns.iter().fold((0.0, 0.0), |a, c| (a.0 + c.0, a.1 + c.1));
    ((sq * hx * hv).sqrt(), 0.5 * kin * hx * hv)
}

fn diagnose(t: f64, state: &FieldState, solver: &PoissonSolver, config: &RunConfig) -> Diagnostics {
    let domain = config.case.domain();
    let (e_max, e_l2) = amplitude(state, domain.length, config.amplitude_grid);
    let (f_l2, kinetic_energy) = phase_space_moments(&state.interpolant, domain, config.nx, config.nv);
    let mass = 1.0 - solver.mean(&state.density);
    let field_energy = 0.5
        * solver
            .quadrature_points()
            .iter()
            .zip(solver.quadrature_weights())
            .map(|(&x, &w)| w * state.field.electric_field(x).powi(2))
            .sum::<f64>();
    Diagnostics {
        t,
        e_max,
        e_l2,
        mass,
        f_l2,
        kinetic_energy,
        field_energy,
    }
}

/// `f_h` (minus the reference) on `x_j = j L / nx`, `v_i = -v_max + 2 i v_max / (nv - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub nx: usize,
    pub nv: usize,
    pub length: f64,
    pub v_max: f64,
    pub reference: Reference,
    /// Row-major, one row per velocity node.
    pub values: Vec<f64>,
}

impl Snapshot {
    pub fn value(&self, i_v: usize, j_x: usize) -> f64 {
        self.values[i_v * self.nx + j_x]
    }
}

/// Samples an interpolant on the snapshot grid.
///
/// # Panics
///
/// Panics if `nx == 0` or `nv < 2`.
pub fn snapshot(
    t: f64,
    interpolant: &Interpolant,
    domain: Domain,
    nx: usize,
    nv: usize,
    reference: Reference,
) -> Snapshot {
    assert!(nx >= 1 && nv >= 2, "snapshot grid {nx} x {nv} too small");
    let dv = 2.0 * domain.v_max / (nv - 1) as f64;
    let rows: Vec<Vec<f64>> = (0..nv)
        .into_par_iter()
        .map(|i| {
            let v = -domain.v_max + i as f64 * dv;
            let offset = match reference {
                Reference::None => 0.0,
                Reference::Maxwellian => maxwellian(v),
            };
            (0..nx)
                .map(|j| interpolant.evaluate(PhasePoint::new(j as f64 * domain.length / nx as f64, v)) - offset)
                .collect()
        })
        .collect();
    Snapshot {
        t,
        nx,
        nv,
        length: domain.length,
        v_max: domain.v_max,
        reference,
        values: rows.concat(),
    }
}

/// `max |f_h - f_exact|` over an `ERROR_GRID²` grid of cell midpoints in
/// `[0, L) × [-v_max, v_max]`.
pub fn free_streaming_error(interpolant: &Interpolant, case: &BenchmarkCase, t: f64) -> f64 {
    let domain = case.domain();
    let (hx, hv) = cell_sizes(domain, ERROR_GRID, ERROR_GRID);
    (0..ERROR_GRID)
        .into_par_iter()
        .map(|i| {
            let x = (i as f64 + 0.5) * hx;
            (0..ERROR_GRID)
                .map(|j| {
                    let v = -domain.v_max + (j as f64 + 0.5) * hv;
                    (interpolant.evaluate(PhasePoint::new(x, v)) - case.free_streaming_solution(t, x, v)).abs()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

/// Which optional per-step data a run keeps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Keep `E` on the amplitude grid at every recorded time.
    pub field_samples: bool,
    /// Measure the free-streaming error at every recorded time.
    pub free_streaming_error: bool,
    /// Skip the `f_h` moments (faster; they are reported as NaN).
    pub skip_moments: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub diagnostics: Vec<Diagnostics>,
    pub snapshots: Vec<Snapshot>,
    /// `E(x_j)` on the amplitude grid, one entry per diagnostics row.
    pub field_samples: Vec<Vec<f64>>,
    /// `(t, error)` pairs.
    pub free_streaming_errors: Vec<(f64, f64)>,
    pub final_ensemble: ParticleEnsemble,
}

impl RunOutput {
    pub fn times(&self) -> Vec<f64> {
        self.diagnostics.iter().map(|d| d.t).collect()
    }

    pub fn e_max(&self) -> Vec<f64> {
        self.diagnostics.iter().map(|d| d.e_max).collect()
    }
}

/// Number of steps of size `dt` needed to reach `t_end`.
pub fn step_count(t_end: f64, dt: f64) -> usize {
    let n = t_end / dt;
    // tolerate t_end being a rounded multiple of dt
    let rounded = n.round();
    if (n - rounded).abs() < 1e-9 * n.max(1.0) {
        rounded as usize
    } else {
        n.ceil() as usize
    }
}

/// Runs a benchmark from `t = 0` until `t ≥ t_end`, recording diagnostics at
/// every step (including the initial and the final state).
pub fn run(config: &RunConfig, options: RunOptions) -> Result<RunOutput, SimulationError> {
    let pipeline = Pipeline::from_config(config)?;
    let mut ensemble = sample_particles(&config.case, config.nx, config.nv);
    let dt = config.integrator.dt;
    let steps = step_count(config.t_end, dt);
    let mut out = RunOutput {
        diagnostics: Vec::with_capacity(steps + 1),
        snapshots: Vec::new(),
        field_samples: Vec::new(),
        free_streaming_errors: Vec::new(),
        final_ensemble: ensemble.clone(),
    };
    let mut pending: Vec<f64> = config.snapshot_times.clone();
    pending.sort_by(f64::total_cmp);
    pending.dedup();

    let mut record = |t: f64, state: &FieldState, out: &mut RunOutput| {
        let d = if options.skip_moments {
            let (e_max, e_l2) = amplitude(state, config.case.params.length, config.amplitude_grid);
            Diagnostics {
                t,
                e_max,
                e_l2,
                mass: 1.0 - pipeline.solver.mean(&state.density),
                f_l2: f64::NAN,
                kinetic_energy: f64::NAN,
                field_energy: f64::NAN,
            }
        } else {
            diagnose(t, state, &pipeline.solver, config)
        };
        out.diagnostics.push(d);
        if options.field_samples {
            let h = config.case.params.length / config.amplitude_grid as f64;
            out.field_samples.push(
                (0..config.amplitude_grid)
                    .map(|j| state.field_at(j as f64 * h))
                    .collect(),
            );
        }
        if options.free_streaming_error {
            out.free_streaming_errors
                .push((t, free_streaming_error(&state.interpolant, &config.case, t)));
        }
        pending.retain(|&ts| {
            if (ts - t).abs() <= 0.5 * dt {
                out.snapshots.push(snapshot(
                    ts,
                    &state.interpolant,
                    config.case.domain(),
                    config.snapshot_nx,
                    config.snapshot_nv,
                    config.snapshot_reference,
                ));
                false
            } else {
                true
            }
        });
        log::debug!("t = {t:.4}, E_max = {:.6e}", d.e_max);
    };

    for n in 0..steps {
        let t = n as f64 * dt;
        let outcome = step(&ensemble, &pipeline, config.integrator).map_err(|source| SimulationError::Step {
            step: n,
            t,
            source,
        })?;
        record(t, &outcome.initial_field, &mut out);
        ensemble = outcome.ensemble;
    }
    let t = steps as f64 * dt;
    let state = pipeline
        .build(&ensemble)
        .map_err(|source| SimulationError::Final { t, source })?;
    record(t, &state, &mut out);
    out.final_ensemble = ensemble;
    Ok(out)
}
