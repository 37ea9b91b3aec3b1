//! Dense symmetric positive definite solves backed by `faer`.
//!
//! Factorizations always run sequentially so that results are bitwise
//! reproducible; callers parallelize over independent systems instead.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::cholesky::llt;
use faer::linalg::cholesky::llt::factor::LltError;
use faer::{Mat, Par};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("matrix is not positive definite (non-positive pivot at index {pivot})")]
pub struct NotPositiveDefinite {
    pub pivot: usize,
}

/// Lower Cholesky factor `L` with `A = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    factor: Mat<f64>,
}

impl Cholesky {
    /// Factors the symmetric matrix `a`; only its lower triangle is read.
    pub fn factor(mut a: Mat<f64>) -> Result<Self, NotPositiveDefinite> {
        assert_eq!(a.nrows(), a.ncols(), "Cholesky needs a square matrix");
        let n = a.nrows();
        let mut buf = MemBuffer::new(llt::factor::cholesky_in_place_scratch::<f64>(
            n,
            Par::Seq,
            Default::default(),
        ));
        let stack = MemStack::new(&mut buf);
        match llt::factor::cholesky_in_place(a.as_mut(), Default::default(), Par::Seq, stack, Default::default()) {
            Ok(_) => Ok(Self { factor: a }),
            Err(LltError::NonPositivePivot { index }) => Err(NotPositiveDefinite { pivot: index }),
        }
    }

    pub fn dim(&self) -> usize {
        self.factor.nrows()
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        assert_eq!(rhs.len(), self.dim(), "right-hand side length");
        let mut x = Mat::from_fn(rhs.len(), 1, |i, _| rhs[i]);
        let mut buf = MemBuffer::new(llt::solve::solve_in_place_scratch::<f64>(self.dim(), 1, Par::Seq));
        let stack = MemStack::new(&mut buf);
        llt::solve::solve_in_place(self.factor.as_ref(), x.as_mut(), Par::Seq, stack);
        (0..rhs.len()).map(|i| x[(i, 0)]).collect()
    }
}
