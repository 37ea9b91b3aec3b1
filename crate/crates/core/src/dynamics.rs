//! Time integration of the characteristics `ẋ = v`, `v̇ = -E(x)`.
//!
//! The field is always rebuilt from the particle positions at the start of a
//! step (and, for RK4, at every stage), never extrapolated from earlier steps.

use std::fmt;

use rayon::prelude::*;

use crate::direct::InterpolationError;
use crate::field::{FieldError, FieldSolution};
use crate::particles::{ParticleEnsemble, PhasePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    SymplecticEuler,
    Rk4,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::SymplecticEuler => "symplectic_euler",
            Scheme::Rk4 => "rk4",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "symplectic_euler" => Ok(Scheme::SymplecticEuler),
            "rk4" => Ok(Scheme::Rk4),
            other => Err(format!(
                "unknown integrator '{other}' (expected symplectic_euler or rk4)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub scheme: Scheme,
    pub dt: f64,
}

/// Pipeline stage in which a failure occurred.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Interpolate,
    Density,
    Poisson,
    Push,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Interpolate => "interpolate",
            Phase::Density => "density",
            Phase::Poisson => "poisson",
            Phase::Push => "push",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PhaseError {
    #[error("interpolate: {0}")]
    Interpolate(#[from] InterpolationError),
    #[error("density: non-finite charge density at x = {x}")]
    Density { x: f64 },
    #[error("poisson: {0}")]
    Poisson(#[from] FieldError),
    #[error("push: particle {index} reached a non-finite position")]
    Push { index: usize },
}

impl PhaseError {
    pub fn phase(&self) -> Phase {
        match self {
            PhaseError::Interpolate(_) => Phase::Interpolate,
            PhaseError::Density { .. } => Phase::Density,
            PhaseError::Poisson(_) => Phase::Poisson,
            PhaseError::Push { .. } => Phase::Push,
        }
    }
}

/// Failure inside one step; `stage` counts from 1 (always 1 for symplectic Euler).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("stage {stage}: {source}")]
pub struct StepError {
    pub stage: usize,
    #[source]
    pub source: PhaseError,
}

pub trait ElectricField {
    fn field_at(&self, x: f64) -> f64;
}

impl ElectricField for FieldSolution {
    fn field_at(&self, x: f64) -> f64 {
        self.electric_field(x)
    }
}

impl<F: Fn(f64) -> f64> ElectricField for F {
    fn field_at(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Maps a particle snapshot to an electric field (interpolate, integrate the
/// density, solve Poisson). Must not keep state between calls.
pub trait FieldBuilder {
    type Output: ElectricField + Sync;

    fn build(&self, ensemble: &ParticleEnsemble) -> Result<Self::Output, PhaseError>;
}

impl<F, O> FieldBuilder for F
where
    F: Fn(&ParticleEnsemble) -> Result<O, PhaseError>,
    O: ElectricField + Sync,
{
    type Output = O;

    fn build(&self, ensemble: &ParticleEnsemble) -> Result<O, PhaseError> {
        self(ensemble)
    }
}

/// Result of one step: the advanced ensemble and the field built from the
/// positions at the start of the step.
#[derive(Debug)]
pub struct StepOutcome<F> {
    pub ensemble: ParticleEnsemble,
    pub initial_field: F,
}

fn build_stage<B: FieldBuilder>(
    builder: &B,
    ensemble: &ParticleEnsemble,
    stage: usize,
) -> Result<B::Output, StepError> {
    builder.build(ensemble).map_err(|source| StepError { stage, source })
}

fn check_finite(positions: &[PhasePoint], stage: usize) -> Result<(), StepError> {
    match positions.iter().position(|p| !(p.x.is_finite() && p.v.is_finite())) {
        Some(index) => Err(StepError {
            stage,
            source: PhaseError::Push { index },
        }),
        None => Ok(()),
    }
}

/// Kick-drift symplectic Euler: `v ← v - Δt E(x)`, then `x ← x + Δt v`.
pub fn symplectic_euler_step<B: FieldBuilder>(
    ensemble: &ParticleEnsemble,
    builder: &B,
    dt: f64,
) -> Result<StepOutcome<B::Output>, StepError> {
    let field = build_stage(builder, ensemble, 1)?;
    let positions: Vec<PhasePoint> = ensemble
        .positions()
        .par_iter()
        .map(|p| {
            let v = p.v - dt * field.field_at(p.x);
            PhasePoint::new(p.x + dt * v, v)
        })
        .collect();
    check_finite(&positions, 1)?;
    Ok(StepOutcome {
        ensemble: ensemble.with_positions(positions),
        initial_field: field,
    })
}

/// Classical fourth-order Runge-Kutta; the field is rebuilt from each stage's
/// provisional positions.
pub fn rk4_step<B: FieldBuilder>(
    ensemble: &ParticleEnsemble,
    builder: &B,
    dt: f64,
) -> Result<StepOutcome<B::Output>, StepError> {
    let start = ensemble.positions();
    let slope = |field: &B::Output, at: &[PhasePoint]| -> Vec<PhasePoint> {
        at.par_iter()
            .map(|p| PhasePoint::new(p.v, -field.field_at(p.x)))
            .collect()
    };
    let advance = |by: f64, slope: &[PhasePoint]| -> Vec<PhasePoint> {
        start
            .par_iter()
            .zip(slope)
            .map(|(p, k)| PhasePoint::new(p.x + by * k.x, p.v + by * k.v))
            .collect()
    };

    let field1 = build_stage(builder, ensemble, 1)?;
    let k1 = slope(&field1, start);

    let z2 = advance(0.5 * dt, &k1);
    check_finite(&z2, 2)?;
    let e2 = ensemble.with_positions(z2);
    let k2 = slope(&build_stage(builder, &e2, 2)?, e2.positions());

    let z3 = advance(0.5 * dt, &k2);
    check_finite(&z3, 3)?;
    let e3 = ensemble.with_positions(z3);
    let k3 = slope(&build_stage(builder, &e3, 3)?, e3.positions());

    let z4 = advance(dt, &k3);
    check_finite(&z4, 4)?;
    let e4 = ensemble.with_positions(z4);
    let k4 = slope(&build_stage(builder, &e4, 4)?, e4.positions());

    let positions: Vec<PhasePoint> = start
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let dx = k1[i].x + 2.0 * k2[i].x + 2.0 * k3[i].x + k4[i].x;
            let dv = k1[i].v + 2.0 * k2[i].v + 2.0 * k3[i].v + k4[i].v;
            PhasePoint::new(p.x + dt / 6.0 * dx, p.v + dt / 6.0 * dv)
        })
        .collect();
    check_finite(&positions, 4)?;
    Ok(StepOutcome {
        ensemble: ensemble.with_positions(positions),
        initial_field: field1,
    })
}

/// Advances one step with the configured scheme.
pub fn step<B: FieldBuilder>(
    ensemble: &ParticleEnsemble,
    builder: &B,
    config: IntegratorConfig,
) -> Result<StepOutcome<B::Output>, StepError> {
    match config.scheme {
        Scheme::SymplecticEuler => symplectic_euler_step(ensemble, builder, config.dt),
        Scheme::Rk4 => rk4_step(ensemble, builder, config.dt),
    }
}
