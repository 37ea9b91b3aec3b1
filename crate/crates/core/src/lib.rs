//! Interpolating particle method for the 1D-1V Vlasov-Poisson system.
//!
//! Particles follow the characteristics of the Vlasov equation and carry the
//! (constant) value of the distribution function along them. Between the
//! particles, `f` is reconstructed with tensorized Wendland kernel
//! interpolants, either one global system ([`direct`]) or independent local
//! systems on kd-tree boxes ([`piecewise`]). The charge density follows from
//! exact velocity integration of the interpolant, and the field from a
//! periodic B-spline Galerkin Poisson solve ([`field`]).

pub mod analysis;
pub mod cases;
pub mod config;
pub mod direct;
pub mod dynamics;
pub mod field;
pub mod kernels;
pub mod linalg;
pub mod output;
pub mod particles;
pub mod piecewise;
pub mod simulation;

pub use analysis::{convergence_study, dominant_periods, fit_damping, spectral_peaks, ConvergenceRow, DampingFit};
pub use cases::{sample_particles, BenchmarkCase, CaseKind, CaseParams};
pub use config::{ConfigError, Method, Preset, Reference, Resolution, RunConfig};
pub use direct::{DirectInterpolant, InterpolationError};
pub use dynamics::{ElectricField, FieldBuilder, IntegratorConfig, Phase, PhaseError, Scheme, StepError};
pub use field::{FieldSolution, PoissonSolver, SplineSpace};
pub use kernels::{KernelSpec, WendlandFunction};
pub use particles::{wrap_position, Domain, ParticleEnsemble, PhasePoint};
pub use piecewise::{KdTree, PiecewiseInterpolant};
pub use simulation::{run, Diagnostics, Interpolant, Pipeline, RunOptions, RunOutput, SimulationError, Snapshot};
