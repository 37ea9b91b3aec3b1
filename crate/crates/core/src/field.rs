//! Periodic Poisson solve `-φ'' = ρ` with a Galerkin method on uniform
//! periodic B-splines of degree 7, and evaluation of `E = -φ'`.
//!
//! The stiffness matrix has the constants as its nullspace. The gauge is fixed
//! by requiring zero mean of `φ`, which for uniform knots is `Σ φ_j = 0`. The
//! solver factors `A + s 11ᵀ` (SPD) once; for a load vector with zero sum the
//! solution of that system is exactly the zero-mean Galerkin solution.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::linalg::Cholesky;
use crate::particles::wrap_position;

/// Spline degree (order 8).
pub const DEGREE: usize = 7;
const ORDER: usize = DEGREE + 1;
/// Gauss points per cell; exact for the degree-12 stiffness integrands.
const GAUSS_POINTS: usize = 8;
/// Mean charge density above which the input is considered non-neutral.
pub const NEUTRALITY_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    #[error("spline space needs at least {min} cells, got {cells}")]
    TooFewCells { cells: usize, min: usize },
    #[error("domain length must be positive and finite, got {0}")]
    InvalidLength(f64),
    #[error("expected {expected} density samples, got {got}")]
    SampleCount { expected: usize, got: usize },
    #[error("density is not finite at quadrature point {index}")]
    NonFiniteDensity { index: usize },
}

/// Periodic B-splines of degree 7 on `cells` uniform cells of `[0, L]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplineSpace {
    cells: usize,
    length: f64,
}

impl SplineSpace {
    pub fn new(cells: usize, length: f64) -> Result<Self, FieldError> {
        if cells < ORDER {
            return Err(FieldError::TooFewCells { cells, min: ORDER });
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(FieldError::InvalidLength(length));
        }
        Ok(Self { cells, length })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn cell_width(&self) -> f64 {
        self.length / self.cells as f64
    }

    /// Number of periodic basis functions (equal to the cell count).
    pub fn dim(&self) -> usize {
        self.cells
    }

    /// Cell index containing `x` (wrapped) and the local coordinate in `[0, 1)`.
    fn locate(&self, x: f64) -> (usize, f64) {
        let x = wrap_position(x, self.length);
        let s = x / self.cell_width();
        let cell = (s.floor() as usize).min(self.cells - 1);
        (cell, (s - cell as f64).clamp(0.0, 1.0))
    }

    /// Global index of local basis function `r` on `cell`.
    #[inline]
    fn global(&self, cell: usize, r: usize) -> usize {
        (cell + self.cells + r - DEGREE) % self.cells
    }

    /// The eight basis functions that are nonzero at `x`: their values and
    /// x-derivatives, plus the global index of the first one.
    pub fn basis(&self, x: f64) -> BasisValues {
        let (cell, u) = self.locate(x);
        let (values, du) = local_basis(u);
        let h = self.cell_width();
        BasisValues {
            first: self.global(cell, 0),
            cells: self.cells,
            values,
            derivatives: du.map(|d| d / h),
        }
    }
}

/// Nonzero basis functions at one point.
#[derive(Debug, Clone, Copy)]
pub struct BasisValues {
    first: usize,
    cells: usize,
    pub values: [f64; ORDER],
    pub derivatives: [f64; ORDER],
}

impl BasisValues {
    /// Global index of local function `r`.
    pub fn index(&self, r: usize) -> usize {
        (self.first + r) % self.cells
    }
}

/// Uniform B-spline values of degree 7 and their derivatives with respect to
/// the local coordinate `u ∈ [0, 1)` of the current cell.
fn local_basis(u: f64) -> ([f64; ORDER], [f64; ORDER]) {
    let mut n = [0.0; ORDER];
    let mut left = [0.0; ORDER];
    let mut right = [0.0; ORDER];
    let mut lower = [0.0; ORDER];
    n[0] = 1.0;
    for j in 1..=DEGREE {
        if j == DEGREE {
            lower = n;
        }
        left[j] = u + j as f64 - 1.0;
        right[j] = j as f64 - u;
        let mut saved = 0.0;
        for r in 0..j {
            let temp = n[r] / (right[r + 1] + left[j - r]);
            n[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        n[j] = saved;
    }
    let mut dn = [0.0; ORDER];
    for r in 0..ORDER {
        let a = if r >= 1 { lower[r - 1] } else { 0.0 };
        let b = if r < DEGREE { lower[r] } else { 0.0 };
        dn[r] = a - b;
    }
    (n, dn)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Dense stiffness matrix `A_jk = ∫ B_j' B_k' dx` (row-major, `dim × dim`).
pub fn assemble_stiffness(space: &SplineSpace) -> Vec<f64> {
    let dim = space.dim();
    let h = space.cell_width();
    let (nodes, weights) = gauss_legendre(GAUSS_POINTS);
    let mut a = vec![0.0; dim * dim];
    for cell in 0..space.cells {
        for (t, w) in nodes.iter().zip(&weights) {
            let u = 0.5 * (t + 1.0);
            let (_, du) = local_basis(u);
            let scale = 0.5 * w * h / (h * h);
            for r in 0..ORDER {
                let j = space.global(cell, r);
                for s in 0..ORDER {
                    let k = space.global(cell, s);
                    a[j * dim + k] += scale * du[r] * du[s];
                }
            }
        }
    }
    for j in 0..dim {
        for k in (j + 1)..dim {
            let mean = 0.5 * (a[j * dim + k] + a[k * dim + j]);
            a[j * dim + k] = mean;
            a[k * dim + j] = mean;
        }
    }
    a
}

/// Factored Galerkin system for one spline space, reusable across time steps.
#[derive(Debug, Clone)]
pub struct PoissonSolver {
    space: SplineSpace,
    factor: Cholesky,
    points: Vec<f64>,
    weights: Vec<f64>,
    // shared by clones so a run warns about non-neutral densities only once
    warned: Arc<AtomicBool>,
}

impl PoissonSolver {
    pub fn new(space: SplineSpace) -> Self {
        let dim = space.dim();
        let mut a = assemble_stiffness(&space);
        let shift = a[0];
        for v in a.iter_mut() {
            *v += shift;
        }
        let matrix = faer::Mat::from_fn(dim, dim, |i, j| a[i * dim + j]);
        let factor = Cholesky::factor(matrix).expect("regularized periodic stiffness matrix is SPD");

        let (nodes, gw) = gauss_legendre(GAUSS_POINTS);
        let h = space.cell_width();
        let mut points = Vec::with_capacity(space.cells * GAUSS_POINTS);
        let mut weights = Vec::with_capacity(space.cells * GAUSS_POINTS);
        for cell in 0..space.cells {
            for (t, w) in nodes.iter().zip(&gw) {
                points.push((cell as f64 + 0.5 * (t + 1.0)) * h);
                weights.push(0.5 * w * h);
            }
        }
        Self {
            space,
            factor,
            points,
            weights,
            warned: Arc::new(AtomicBool::new(false)),
        }
    }

    pub fn space(&self) -> &SplineSpace {
        &self.space
    }

    /// Points at which the density must be sampled for [`PoissonSolver::solve`].
    pub fn quadrature_points(&self) -> &[f64] {
        &self.points
    }

    pub fn quadrature_weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(1/L) ∫ g` for samples of `g` at the quadrature points.
    pub fn mean(&self, samples: &[f64]) -> f64 {
        samples.iter().zip(&self.weights).map(|(g, w)| g * w).sum::<f64>() / self.space.length
    }

    /// Solves `-φ'' = ρ - mean(ρ)` for density samples at the quadrature points.
    pub fn solve(&self, density: &[f64]) -> Result<FieldSolution, FieldError> {
        if density.len() != self.points.len() {
            return Err(FieldError::SampleCount {
                expected: self.points.len(),
                got: density.len(),
            });
        }
        if let Some(index) = density.iter().position(|r| !r.is_finite()) {
            return Err(FieldError::NonFiniteDensity { index });
        }
        let mean = self.mean(density);
        if mean.abs() > NEUTRALITY_TOLERANCE && !self.warned.swap(true, Ordering::Relaxed) {
            log::warn!("charge density is not neutral: mean {mean:.3e} (further warnings suppressed)");
        }

        let mut load = vec![0.0; self.space.dim()];
        for ((&x, &w), &rho) in self.points.iter().zip(&self.weights).zip(density) {
            let basis = self.space.basis(x);
            let g = w * (rho - mean);
            for r in 0..ORDER {
                load[basis.index(r)] += g * basis.values[r];
            }
        }
        // remove the rounding residue so the load is orthogonal to constants
        let drift = load.iter().sum::<f64>() / load.len() as f64;
        load.iter_mut().for_each(|l| *l -= drift);

        Ok(FieldSolution {
            space: self.space,
            coefficients: self.factor.solve(&load),
            density_mean: mean,
        })
    }

    /// Convenience wrapper sampling `density` at the quadrature points.
    pub fn solve_with(&self, density: impl Fn(f64) -> f64) -> Result<FieldSolution, FieldError> {
        let samples: Vec<f64> = self.points.iter().map(|&x| density(x)).collect();
        self.solve(&samples)
    }
}

/// Spline potential with zero mean; `E = -φ'`.
#[derive(Debug, Clone)]
pub struct FieldSolution {
    space: SplineSpace,
    coefficients: Vec<f64>,
    density_mean: f64,
}

impl FieldSolution {
    /// A vanishing potential on `space`.
    pub fn zero(space: SplineSpace) -> Self {
        Self {
            space,
            coefficients: vec![0.0; space.dim()],
            density_mean: 0.0,
        }
    }

    pub fn space(&self) -> &SplineSpace {
        &self.space
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Mean of the input density that was removed before solving.
    pub fn density_mean(&self) -> f64 {
        self.density_mean
    }

    pub fn neutrality_violated(&self) -> bool {
        self.density_mean.abs() > NEUTRALITY_TOLERANCE
    }

    pub fn potential(&self, x: f64) -> f64 {
        let basis = self.space.basis(x);
        (0..ORDER)
            .map(|r| self.coefficients[basis.index(r)] * basis.values[r])
            .sum()
    }

    pub fn electric_field(&self, x: f64) -> f64 {
        let basis = self.space.basis(x);
        -(0..ORDER)
            .map(|r| self.coefficients[basis.index(r)] * basis.derivatives[r])
            .sum::<f64>()
    }
}
