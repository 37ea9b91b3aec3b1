use std::sync::Arc;

/// A point `(x, v)` in phase space.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhasePoint {
    pub x: f64,
    pub v: f64,
}

impl PhasePoint {
    pub const fn new(x: f64, v: f64) -> Self {
        Self { x, v }
    }
}

/// Maps `x` onto `[0, length)` assuming period `length`.
pub fn wrap_position(x: f64, length: f64) -> f64 {
    let wrapped = x - length * (x / length).floor();
    // rounding can land exactly on `length` for tiny negative x
    if wrapped >= length {
        wrapped - length
    } else {
        wrapped
    }
}

/// Periodic phase-space domain `[0, L) × [-v_max, v_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub length: f64,
    pub v_max: f64,
}

impl Domain {
    pub fn new(length: f64, v_max: f64) -> Self {
        Self { length, v_max }
    }
}

/// Particles moving along characteristics, each carrying the value of the
/// initial distribution at its starting point.
///
/// Values are shared and never mutated; stepping produces a new ensemble with
/// new positions and the same value buffer.
#[derive(Debug, Clone)]
pub struct ParticleEnsemble {
    positions: Vec<PhasePoint>,
    values: Arc<[f64]>,
    domain: Domain,
}

impl ParticleEnsemble {
    /// # Panics
    ///
    /// Panics if `positions` and `values` differ in length.
    pub fn new(positions: Vec<PhasePoint>, values: Vec<f64>, domain: Domain) -> Self {
        assert_eq!(positions.len(), values.len(), "one value per particle");
        let mut ensemble = Self {
            positions,
            values: values.into(),
            domain,
        };
        ensemble.wrap();
        ensemble
    }

    /// Same values, new positions (x is wrapped into `[0, L)`).
    pub fn with_positions(&self, positions: Vec<PhasePoint>) -> Self {
        assert_eq!(positions.len(), self.values.len(), "one position per particle");
        let mut ensemble = Self {
            positions,
            values: Arc::clone(&self.values),
            domain: self.domain,
        };
        ensemble.wrap();
        ensemble
    }

    fn wrap(&mut self) {
        let length = self.domain.length;
        for p in &mut self.positions {
            p.x = wrap_position(p.x, length);
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[PhasePoint] {
        &self.positions
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Shared handle to the value buffer; identity is preserved across steps.
    pub fn values_handle(&self) -> &Arc<[f64]> {
        &self.values
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn length(&self) -> f64 {
        self.domain.length
    }

    pub fn v_max(&self) -> f64 {
        self.domain.v_max
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wrap_examples() {
        let l = 4.0 * PI;
        assert_eq!(wrap_position(l, l), 0.0);
        assert!((wrap_position(-0.25, l) - (l - 0.25)).abs() < 1e-15);
        assert!((wrap_position(2.5 * l, l) - 0.5 * l).abs() < 1e-14);
        assert!(wrap_position(-1e-300, l) < l);
    }

    #[test]
    fn construction_wraps_and_shares_values() {
        let domain = Domain::new(1.0, 2.0);
        let e = ParticleEnsemble::new(
            vec![PhasePoint::new(1.25, 0.0), PhasePoint::new(-0.5, 1.0)],
            vec![0.1, 0.2],
            domain,
        );
        assert_eq!(e.positions()[0].x, 0.25);
        assert_eq!(e.positions()[1].x, 0.5);
        let moved = e.with_positions(vec![PhasePoint::new(0.0, 0.0); 2]);
        assert!(Arc::ptr_eq(e.values_handle(), moved.values_handle()));
    }
}
