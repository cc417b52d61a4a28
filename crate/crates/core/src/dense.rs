use num_complex::Complex64;

use crate::error::Error;

/// Dense square complex matrix, row-major.
///
/// This is the reference path for operator correctness: matrices are built
/// literally from their defining products and applied with a plain
/// matrix-vector multiply. The cost is O(dim^2) per application and O(dim^3)
/// per product, so construction is capped at small registers.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m[(k, k)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "rows must form a square matrix");
            for (c, &v) in row.iter().enumerate() {
                m[(r, c)] = v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Matrix-vector product `self * x`.
    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>, Error> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                state_len: x.len(),
                matrix_dim: self.dim,
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for (r, slot) in out.iter_mut().enumerate() {
            let row = &self.entries[r * self.dim..(r + 1) * self.dim];
            let mut acc = Complex64::new(0.0, 0.0);
            for (&m, &v) in row.iter().zip(x) {
                acc += m * v;
            }
            *slot = acc;
        }
        Ok(out)
    }

    /// Matrix-matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions must agree");
        let dim = self.dim;
        let mut out = DenseMatrix::zeros(dim);
        for r in 0..dim {
            for k in 0..dim {
                let a = self[(r, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..dim {
                    out[(r, c)] += a * rhs[(k, c)];
                }
            }
        }
        out
    }

    pub fn conjugate_transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    /// Max-norm distance from the identity, used for unitarity and involution
    /// checks.
    pub fn max_deviation_from_identity(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in 0..self.dim {
                let expect = if r == c { 1.0 } else { 0.0 };
                let dev = (self[(r, c)] - Complex64::new(expect, 0.0)).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// True when `self† self` is the identity within `tol` in max norm.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.conjugate_transpose()
            .matmul(self)
            .max_deviation_from_identity()
            <= tol
    }

    pub fn max_abs_difference(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.entries[r * self.dim + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[r * self.dim + c]
    }
}
