//! Compactly supported Wendland functions in one dimension and the tensorized
//! phase-space kernel built from them.
//!
//! Both radial functions are supported on `[0, 1]` and normalized to `b(0) = 1`:
//!
//! | order | `b(r)`                        | smoothness | `∫₀¹ b` |
//! |-------|-------------------------------|------------|---------|
//! | 2     | `(1 - r)³ (3r + 1)`           | C²         | 2/5     |
//! | 4     | `(1 - r)⁵ (8r² + 5r + 1)`     | C⁴         | 1/3     |
//!
//! The antiderivative `∫₀ʳ b` is stored as monomial coefficients computed once
//! at construction, so every velocity integral of an interpolant is exact.

use std::fmt;

use crate::particles::PhasePoint;

/// Highest number of monomial coefficients any antiderivative needs (degree 8).
const MAX_COEFFS: usize = 9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("unsupported kernel order {0} (expected 2 or 4)")]
    UnsupportedOrder(u32),
    #[error("kernel scale {name} must be positive and finite, got {value}")]
    InvalidScale { name: &'static str, value: f64 },
    #[error("integration bounds are reversed: lower {lower} > upper {upper}")]
    ReversedBounds { lower: f64, upper: f64 },
}

/// A one-dimensional Wendland radial function `b` together with its antiderivative.
#[derive(Clone, Copy, PartialEq)]
pub struct WendlandFunction {
    order: u32,
    /// Monomial coefficients of `𝔟(r) = ∫₀ʳ b(s) ds`, lowest degree first.
    antiderivative: [f64; MAX_COEFFS],
    /// `𝔟(1)`, the integral over the full support.
    half_mass: f64,
}

impl fmt::Debug for WendlandFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WendlandFunction").field("order", &self.order).finish()
    }
}

impl WendlandFunction {
    pub fn new(order: u32) -> Result<Self, KernelError> {
        // b(r) = (1 - r)^p q(r) on [0, 1]
        let (power, factor): (u32, &[f64]) = match order {
            2 => (3, &[1.0, 3.0]),
            4 => (5, &[1.0, 5.0, 8.0]),
            other => return Err(KernelError::UnsupportedOrder(other)),
        };

        let mut poly = factor.to_vec();
        for _ in 0..power {
            poly = multiply(&poly, &[1.0, -1.0]);
        }

        let mut antiderivative = [0.0; MAX_COEFFS];
        for (degree, coeff) in poly.iter().enumerate() {
            antiderivative[degree + 1] = coeff / (degree + 1) as f64;
        }
        let half_mass = horner(&antiderivative, 1.0);

        Ok(Self {
            order,
            antiderivative,
            half_mass,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Evaluates `b(r)`.
    ///
    /// # Panics
    ///
    /// Panics if `r` is negative or NaN.
    pub fn eval(&self, r: f64) -> f64 {
        assert!(r >= 0.0, "radial argument must be non-negative, got {r}");
        self.eval_unchecked(r)
    }

    /// `b(r)` for `r` already known to be non-negative.
    #[inline]
    pub(crate) fn eval_unchecked(&self, r: f64) -> f64 {
        if r >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - r;
        match self.order {
            2 => {
                let s3 = s * s * s;
                s3 * (3.0 * r + 1.0)
            }
            _ => {
                let s2 = s * s;
                let s5 = s2 * s2 * s;
                s5 * ((8.0 * r + 5.0) * r + 1.0)
            }
        }
    }

    /// Evaluates `𝔟(r) = ∫₀ʳ b(s) ds`; constant for `r ≥ 1`.
    ///
    /// # Panics
    ///
    /// Panics if `r` is negative or NaN.
    pub fn antiderivative(&self, r: f64) -> f64 {
        assert!(r >= 0.0, "radial argument must be non-negative, got {r}");
        if r >= 1.0 {
            self.half_mass
        } else {
            horner(&self.antiderivative, r)
        }
    }

    /// Odd extension `sign(t) 𝔟(min(|t|, 1))`, an antiderivative of `b(|t|)` on ℝ.
    #[inline]
    pub(crate) fn odd_antiderivative(&self, t: f64) -> f64 {
        let a = t.abs();
        let value = if a >= 1.0 {
            self.half_mass
        } else {
            horner(&self.antiderivative, a)
        };
        if t < 0.0 {
            -value
        } else {
            value
        }
    }

    /// `𝔟(1)`.
    pub fn half_mass(&self) -> f64 {
        self.half_mass
    }
}

fn multiply(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[inline]
fn horner(coeffs: &[f64], r: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c)
}

/// Tensor-product kernel `k(z, z̃) = b(|x - x̃| / σ_x) · b(|v - ṽ| / σ_v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    radial: WendlandFunction,
    sigma_x: f64,
    sigma_v: f64,
}

impl KernelSpec {
    pub fn new(order: u32, sigma_x: f64, sigma_v: f64) -> Result<Self, KernelError> {
        let radial = WendlandFunction::new(order)?;
        for (name, value) in [("sigma_x", sigma_x), ("sigma_v", sigma_v)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(KernelError::InvalidScale { name, value });
            }
        }
        Ok(Self {
            radial,
            sigma_x,
            sigma_v,
        })
    }

    pub fn radial(&self) -> &WendlandFunction {
        &self.radial
    }

    pub fn sigma_x(&self) -> f64 {
        self.sigma_x
    }

    pub fn sigma_v(&self) -> f64 {
        self.sigma_v
    }

    /// The x-factor `b(|dx| / σ_x)`.
    #[inline]
    pub fn x_factor(&self, dx: f64) -> f64 {
        self.radial.eval_unchecked(dx.abs() / self.sigma_x)
    }

    /// The v-factor `b(|dv| / σ_v)`.
    #[inline]
    pub fn v_factor(&self, dv: f64) -> f64 {
        self.radial.eval_unchecked(dv.abs() / self.sigma_v)
    }

    #[inline]
    pub fn eval_tensor(&self, z: PhasePoint, other: PhasePoint) -> f64 {
        let kx = self.x_factor(z.x - other.x);
        if kx == 0.0 {
            return 0.0;
        }
        kx * self.v_factor(z.v - other.v)
    }

    /// Full-line integral `Λ = ∫ b(|v - c| / σ_v) dv = 2 σ_v 𝔟(1)`.
    pub fn full_line_integral(&self) -> f64 {
        2.0 * self.sigma_v * self.radial.half_mass
    }

    /// `∫_lower^upper b(|v - center| / σ_v) dv`, evaluated exactly.
    pub fn clipped_v_integral(&self, center: f64, lower: f64, upper: f64) -> Result<f64, KernelError> {
        if lower > upper {
            return Err(KernelError::ReversedBounds { lower, upper });
        }
        Ok(self.clipped_v_integral_unchecked(center, lower, upper))
    }

    #[inline]
    pub(crate) fn clipped_v_integral_unchecked(&self, center: f64, lower: f64, upper: f64) -> f64 {
        let hi = self.radial.odd_antiderivative((upper - center) / self.sigma_v);
        let lo = self.radial.odd_antiderivative((lower - center) / self.sigma_v);
        self.sigma_v * (hi - lo)
    }
}
