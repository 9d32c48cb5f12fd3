use ndarray::{Array2, ArrayView2};
use num_complex::Complex64;

use super::QuditError;

/// A dense complex square matrix expected to be unitary.
///
/// Construction does not enforce unitarity (intermediate products and test
/// fixtures are built incrementally); [`UnitaryMatrix::is_unitary`] checks it.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    entries: Array2<Complex64>,
}

impl UnitaryMatrix {
    pub fn new(entries: Array2<Complex64>) -> Result<Self, QuditError> {
        if entries.nrows() != entries.ncols() {
            return Err(QuditError::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        Ok(Self { entries })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: Array2::eye(dim),
        }
    }

    /// Permutation matrix sending basis state `j` to `perm(j)`.
    pub fn permutation(perm: &[usize]) -> Self {
        let dim = perm.len();
        let mut entries = Array2::zeros((dim, dim));
        for (j, &i) in perm.iter().enumerate() {
            entries[[i, j]] = Complex64::new(1.0, 0.0);
        }
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn view(&self) -> ArrayView2<'_, Complex64> {
        self.entries.view()
    }

    /// Max entrywise deviation of `U† U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.entries[[k, i]].conj() * self.entries[[k, j]];
                }
                let expected = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - Complex64::new(expected, 0.0)).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn matmul(&self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix {
            entries: self.entries.dot(&rhs.entries),
        }
    }
}

/// Result of an entrywise matrix comparison.
#[derive(Debug, Clone, Copy)]
pub struct MatrixComparison {
    pub equal: bool,
    pub max_deviation: f64,
}

/// Entrywise comparison at an absolute tolerance. Equality is exact up to
/// `tol`, not up to a global phase: the decompositions verified here are
/// phase-exact, so a phase-blind comparator would mask real defects.
pub fn matrices_equal(
    a: ArrayView2<'_, Complex64>,
    b: ArrayView2<'_, Complex64>,
    tol: f64,
) -> Result<MatrixComparison, QuditError> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(QuditError::ShapeMismatch(
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols(),
        ));
    }
    let max_deviation = a
        .iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    Ok(MatrixComparison {
        equal: max_deviation <= tol,
        max_deviation,
    })
}
