//! Global kernel interpolation over a whole particle set.
//!
//! Periodicity in `x` is handled with ghost centers: every particle whose
//! periodic image lies within one x-support radius of the evaluation window
//! is replicated at that image, carrying the same value. The kernel itself
//! always uses the plain Euclidean distance, which keeps the system matrix
//! symmetric positive definite.

use faer::Mat;

use crate::kernels::KernelSpec;
use crate::linalg::{Cholesky, NotPositiveDefinite};
use crate::particles::{wrap_position, Domain, ParticleEnsemble, PhasePoint};
use crate::piecewise::Bounds;

/// Relative distance below which two particles count as the same point.
pub const DUPLICATE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InterpolationError {
    #[error("particles {first} and {second} coincide; the kernel matrix would be singular")]
    DuplicateCenters { first: usize, second: usize },
    #[error("kernel system is not positive definite (non-positive pivot at index {pivot})")]
    Factorization { pivot: usize },
    #[error("regularization must be non-negative and finite, got {0}")]
    InvalidRegularization(f64),
    #[error("value count {values} does not match center count {centers}")]
    LengthMismatch { centers: usize, values: usize },
    #[error("in box {bounds}: {source}")]
    Leaf {
        bounds: Bounds,
        #[source]
        source: Box<InterpolationError>,
    },
}

impl From<NotPositiveDefinite> for InterpolationError {
    fn from(err: NotPositiveDefinite) -> Self {
        Self::Factorization { pivot: err.pivot }
    }
}

/// Assembles `K_ij = k(z_i, z_j)`.
///
/// Fails if two centers coincide up to [`DUPLICATE_TOLERANCE`] relative to the
/// domain extents.
pub fn assemble_kernel_matrix(
    centers: &[PhasePoint],
    spec: &KernelSpec,
    domain: Domain,
) -> Result<Mat<f64>, InterpolationError> {
    let n = centers.len();
    let tol_x = DUPLICATE_TOLERANCE * domain.length;
    let tol_v = DUPLICATE_TOLERANCE * 2.0 * domain.v_max;
    let mut k = Mat::<f64>::zeros(n, n);
    for j in 0..n {
        k[(j, j)] = 1.0;
        let zj = centers[j];
        for i in (j + 1)..n {
            let zi = centers[i];
            let (dx, dv) = (zi.x - zj.x, zi.v - zj.v);
            if dx.abs() < tol_x && dv.abs() < tol_v {
                return Err(InterpolationError::DuplicateCenters { first: j, second: i });
            }
            let kx = spec.x_factor(dx);
            if kx != 0.0 {
                let value = kx * spec.v_factor(dv);
                k[(i, j)] = value;
                k[(j, i)] = value;
            }
        }
    }
    Ok(k)
}

/// Solves `(K + μ² I) c = f` by Cholesky factorization.
pub fn solve_coefficients(mut k: Mat<f64>, values: &[f64], mu: f64) -> Result<Vec<f64>, InterpolationError> {
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(InterpolationError::InvalidRegularization(mu));
    }
    if values.len() != k.nrows() {
        return Err(InterpolationError::LengthMismatch {
            centers: k.nrows(),
            values: values.len(),
        });
    }
    let shift = mu * mu;
    if shift != 0.0 {
        for i in 0..k.nrows() {
            k[(i, i)] += shift;
        }
    }
    Ok(Cholesky::factor(k)?.solve(values))
}

/// Appends periodic images of `points` whose x lies within one support radius
/// of `[window_lo, window_hi)`.
pub(crate) fn with_periodic_images(
    points: &[PhasePoint],
    values: &[f64],
    length: f64,
    sigma_x: f64,
    window_lo: f64,
    window_hi: f64,
) -> (Vec<PhasePoint>, Vec<f64>) {
    let mut centers = points.to_vec();
    let mut data = values.to_vec();
    let (lo, hi) = (window_lo - sigma_x, window_hi + sigma_x);
    let max_shift = ((hi - lo) / length).ceil() as i64 + 1;
    for shift in (1..=max_shift).flat_map(|s| [-s, s]) {
        let offset = shift as f64 * length;
        for (p, &f) in points.iter().zip(values) {
            let x = p.x + offset;
            if x > lo && x < hi {
                centers.push(PhasePoint::new(x, p.v));
                data.push(f);
            }
        }
    }
    (centers, data)
}

/// `f_h(z) = Σ c_i k(z, z_i)` over all (possibly ghost-augmented) centers.
#[derive(Debug, Clone)]
pub struct DirectInterpolant {
    centers: Vec<PhasePoint>,
    coefficients: Vec<f64>,
    spec: KernelSpec,
    regularization: f64,
    length: f64,
}

impl DirectInterpolant {
    /// Fits the global interpolant to an ensemble, adding ghost centers near
    /// `x = 0` and `x = L`.
    pub fn fit(ensemble: &ParticleEnsemble, spec: KernelSpec, mu: f64) -> Result<Self, InterpolationError> {
        let domain = ensemble.domain();
        Self::fit_window(
            ensemble.positions(),
            ensemble.values(),
            domain,
            spec,
            mu,
            (0.0, domain.length),
        )
    }

    /// Fits to `points` plus the periodic images relevant to evaluations
    /// inside the x-window.
    pub(crate) fn fit_window(
        points: &[PhasePoint],
        values: &[f64],
        domain: Domain,
        spec: KernelSpec,
        mu: f64,
        window: (f64, f64),
    ) -> Result<Self, InterpolationError> {
        let (centers, data) = with_periodic_images(points, values, domain.length, spec.sigma_x(), window.0, window.1);
        let k = assemble_kernel_matrix(&centers, &spec, domain)?;
        let coefficients = solve_coefficients(k, &data, mu)?;
        Ok(Self {
            centers,
            coefficients,
            spec,
            regularization: mu,
            length: domain.length,
        })
    }

    /// Builds an interpolant from known coefficients without solving.
    pub fn from_parts(centers: Vec<PhasePoint>, coefficients: Vec<f64>, spec: KernelSpec, length: f64) -> Self {
        assert_eq!(centers.len(), coefficients.len(), "one coefficient per center");
        Self {
            centers,
            coefficients,
            spec,
            regularization: 0.0,
            length,
        }
    }

    pub fn centers(&self) -> &[PhasePoint] {
        &self.centers
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn regularization(&self) -> f64 {
        self.regularization
    }

    /// Evaluates the interpolant; `z.x` is wrapped into `[0, L)` first.
    pub fn evaluate(&self, z: PhasePoint) -> f64 {
        let z = PhasePoint::new(wrap_position(z.x, self.length), z.v);
        self.evaluate_raw(z)
    }

    #[inline]
    pub(crate) fn evaluate_raw(&self, z: PhasePoint) -> f64 {
        self.centers
            .iter()
            .zip(&self.coefficients)
            .map(|(&zi, &c)| c * self.spec.eval_tensor(z, zi))
            .sum()
    }

    /// `∫ f_h(x, v) dv` over the whole real line, `Σ c_i b(|x - x_i| / σ_x) Λ`.
    pub fn integrate_v(&self, x: f64) -> f64 {
        let x = wrap_position(x, self.length);
        let sum: f64 = self
            .centers
            .iter()
            .zip(&self.coefficients)
            .map(|(zi, &c)| c * self.spec.x_factor(x - zi.x))
            .sum();
        sum * self.spec.full_line_integral()
    }

    /// `∫_lower^upper f_h(x, v) dv` for an already wrapped `x`.
    #[inline]
    pub(crate) fn clipped_integral(&self, x: f64, lower: f64, upper: f64) -> f64 {
        self.centers
            .iter()
            .zip(&self.coefficients)
            .map(|(zi, &c)| {
                let kx = self.spec.x_factor(x - zi.x);
                if kx == 0.0 {
                    0.0
                } else {
                    c * kx * self.spec.clipped_v_integral_unchecked(zi.v, lower, upper)
                }
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec2() -> KernelSpec {
        KernelSpec::new(2, 1.0, 1.0).unwrap()
    }

    const WIDE: Domain = Domain {
        length: 100.0,
        v_max: 10.0,
    };

    #[test]
    fn assembly_examples() {
        let s = spec2();
        let one = assemble_kernel_matrix(&[PhasePoint::new(1.0, 0.0)], &s, WIDE).unwrap();
        assert_eq!(one[(0, 0)], 1.0);

        let far = [PhasePoint::new(1.0, 0.0), PhasePoint::new(3.0, 0.0)];
        let k = assemble_kernel_matrix(&far, &s, WIDE).unwrap();
        assert_eq!((k[(0, 1)], k[(1, 0)], k[(1, 1)]), (0.0, 0.0, 1.0));

        let near = [PhasePoint::new(1.0, 0.0), PhasePoint::new(1.5, 0.0)];
        let k = assemble_kernel_matrix(&near, &s, WIDE).unwrap();
        assert!((k[(0, 1)] - 0.3125).abs() < 1e-15);
    }

    #[test]
    fn duplicates_are_rejected() {
        let pts = [
            PhasePoint::new(1.0, 0.0),
            PhasePoint::new(2.0, 0.0),
            PhasePoint::new(1.0, 0.0),
        ];
        let err = assemble_kernel_matrix(&pts, &spec2(), WIDE).unwrap_err();
        assert_eq!(err, InterpolationError::DuplicateCenters { first: 0, second: 2 });
    }

    #[test]
    fn solve_examples() {
        let f = [0.3, -1.0, 2.5];
        let c = solve_coefficients(Mat::identity(3, 3), &f, 0.0).unwrap();
        assert_eq!(c, f.to_vec());

        let c = solve_coefficients(Mat::identity(1, 1), &[1.0], 1e-5).unwrap();
        assert!((c[0] - 1.0 / (1.0 + 1e-10)).abs() < 1e-16);

        assert!(matches!(
            solve_coefficients(Mat::identity(1, 1), &[1.0], -1.0),
            Err(InterpolationError::InvalidRegularization(_))
        ));
        let indefinite = Mat::from_fn(2, 2, |i, j| if i == j { 1.0 } else { 2.0 });
        assert_eq!(
            solve_coefficients(indefinite, &[1.0, 1.0], 0.0).unwrap_err(),
            InterpolationError::Factorization { pivot: 1 }
        );
    }

    #[test]
    fn random_spd_system_matches_independent_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 10;
        let b = nalgebra::DMatrix::<f64>::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let spd = &b * b.transpose() + nalgebra::DMatrix::<f64>::identity(n, n) * 0.1;
        let f: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mu = 1e-3;
        let k = Mat::from_fn(n, n, |i, j| spd[(i, j)]);
        let c = solve_coefficients(k, &f, mu).unwrap();

        let shifted = &spd + nalgebra::DMatrix::<f64>::identity(n, n) * (mu * mu);
        let reference = shifted
            .clone()
            .lu()
            .solve(&nalgebra::DVector::from_column_slice(&f))
            .unwrap();
        let fmax = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let residual = &shifted * nalgebra::DVector::from_column_slice(&c) - nalgebra::DVector::from_column_slice(&f);
        assert!(residual.amax() <= 1e-12 * fmax);
        for i in 0..n {
            assert!((c[i] - reference[i]).abs() < 1e-9 * (1.0 + reference[i].abs()));
        }
    }

    #[test]
    fn evaluation_examples() {
        let s = spec2();
        let single = DirectInterpolant::from_parts(vec![PhasePoint::new(5.0, 0.0)], vec![2.0], s, 100.0);
        assert!((single.evaluate(PhasePoint::new(5.5, 0.0)) - 0.625).abs() < 1e-15);
        assert_eq!(single.evaluate(PhasePoint::new(5.0, 3.0)), 0.0);
        assert_eq!(single.evaluate(PhasePoint::new(9.0, 0.0)), 0.0);

        let unit = DirectInterpolant::from_parts(vec![PhasePoint::new(5.0, 0.0)], vec![1.0], s, 100.0);
        assert!((unit.integrate_v(5.0) - 0.8).abs() < 1e-15);
        let zero = DirectInterpolant::from_parts(vec![PhasePoint::new(5.0, 0.0)], vec![0.0], s, 100.0);
        assert_eq!(zero.integrate_v(5.0), 0.0);
    }

    #[test]
    fn ghosts_follow_the_boundaries() {
        let domain = Domain::new(10.0, 5.0);
        let s = KernelSpec::new(2, 1.5, 1.0).unwrap();
        let pts = [
            PhasePoint::new(0.5, 0.0),
            PhasePoint::new(5.0, 0.0),
            PhasePoint::new(9.2, 0.5),
        ];
        let (centers, values) = with_periodic_images(&pts, &[1.0, 2.0, 3.0], domain.length, 1.5, 0.0, 10.0);
        assert_eq!(centers.len(), 5);
        assert!(centers.contains(&PhasePoint::new(10.5, 0.0)));
        assert!(centers.iter().any(|p| (p.x + 0.8).abs() < 1e-12 && p.v == 0.5));
        assert_eq!(values[3..].iter().sum::<f64>(), 4.0);

        // the interpolant is periodic in x
        let interp = DirectInterpolant::fit(
            &ParticleEnsemble::new(pts.to_vec(), vec![1.0, 2.0, 3.0], domain),
            s,
            0.0,
        )
        .unwrap();
        for v in [-0.5, 0.0, 0.7] {
            let a = interp.evaluate_raw(PhasePoint::new(1e-9, v));
            let b = interp.evaluate_raw(PhasePoint::new(10.0 - 1e-9, v));
            assert!((a - b).abs() < 1e-8);
        }
    }
}
