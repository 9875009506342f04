//! Matrix-free linear operator interface.
//!
//! The Krylov machinery only ever needs the action of a square operator on a
//! vector; image-sized operators are never assembled. Dense matrices
//! implement the trait directly so small problems and oracles share the same
//! entry points.

use crate::dense::{Matrix, Vector};

/// A square linear operator on `R^dim` given by its action.
pub trait LinearOperator {
    fn dim(&self) -> usize;

    /// `A x`
    fn apply(&self, x: &Vector) -> Vector;

    /// `A^T x`
    fn apply_transpose(&self, x: &Vector) -> Vector;

    /// The explicit matrix, when one is available at reasonable cost.
    fn as_dense(&self) -> Option<&Matrix> {
        None
    }
}

impl LinearOperator for Matrix {
    fn dim(&self) -> usize {
        assert!(self.is_square(), "operator use requires a square matrix");
        self.rows()
    }

    fn apply(&self, x: &Vector) -> Vector {
        self.matvec(x)
    }

    fn apply_transpose(&self, x: &Vector) -> Vector {
        self.matvec_transpose(x)
    }

    fn as_dense(&self) -> Option<&Matrix> {
        Some(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_operator_round_trip() {
        let a = Matrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let x = Vector::from_vec(vec![1.0, -1.0]);
        let op: &dyn LinearOperator = &a;
        assert_eq!(op.dim(), 2);
        assert_eq!(op.apply(&x).as_slice(), &[-1.0, -1.0]);
        assert_eq!(op.apply_transpose(&x).as_slice(), &[-2.0, -2.0]);
    }
}
