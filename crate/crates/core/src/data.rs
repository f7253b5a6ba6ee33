//! Feature matrices that may be stored dense or sparse.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, DenseMatrix, SparseMatrix};

/// An n×d feature matrix. Labels are kept separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DataMatrix {
    Dense(DenseMatrix),
    Sparse(SparseMatrix),
}

/// A borrowed row of a [`DataMatrix`].
#[derive(Debug, Clone, Copy)]
pub enum RowView<'a> {
    Dense(&'a [f64]),
    Sparse(&'a [usize], &'a [f64]),
}

impl RowView<'_> {
    pub fn dot(&self, w: &[f64]) -> f64 {
        match *self {
            RowView::Dense(x) => dot(x, w),
            RowView::Sparse(idx, vals) => idx.iter().zip(vals).map(|(&c, &v)| v * w[c]).sum(),
        }
    }

    /// `y += alpha · x`.
    pub fn axpy_into(&self, alpha: f64, y: &mut [f64]) {
        match *self {
            RowView::Dense(x) => axpy(alpha, x, y),
            RowView::Sparse(idx, vals) => {
                for (&c, &v) in idx.iter().zip(vals) {
                    y[c] += alpha * v;
                }
            }
        }
    }

    pub fn sq_norm(&self) -> f64 {
        match *self {
            RowView::Dense(x) => dot(x, x),
            RowView::Sparse(_, vals) => vals.iter().map(|v| v * v).sum(),
        }
    }

    pub fn nnz(&self) -> usize {
        match *self {
            RowView::Dense(x) => x.iter().filter(|v| **v != 0.0).count(),
            RowView::Sparse(idx, _) => idx.len(),
        }
    }

    /// Inner product of two rows of the same width.
    pub fn dot_row(&self, other: &RowView<'_>) -> f64 {
        match (*self, *other) {
            (RowView::Dense(a), RowView::Dense(b)) => dot(a, b),
            (RowView::Dense(a), s @ RowView::Sparse(..)) | (s @ RowView::Sparse(..), RowView::Dense(a)) => {
                s.dot(a)
            }
            (RowView::Sparse(ia, va), RowView::Sparse(ib, vb)) => {
                let (mut p, mut q, mut s) = (0, 0, 0.0);
                while p < ia.len() && q < ib.len() {
                    match ia[p].cmp(&ib[q]) {
                        std::cmp::Ordering::Less => p += 1,
                        std::cmp::Ordering::Greater => q += 1,
                        std::cmp::Ordering::Equal => {
                            s += va[p] * vb[q];
                            p += 1;
                            q += 1;
                        }
                    }
                }
                s
            }
        }
    }
}

impl DataMatrix {
    pub fn rows(&self) -> usize {
        match self {
            DataMatrix::Dense(m) => m.rows(),
            DataMatrix::Sparse(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            DataMatrix::Dense(m) => m.cols(),
            DataMatrix::Sparse(m) => m.cols(),
        }
    }

    pub fn nnz(&self) -> usize {
        match self {
            DataMatrix::Dense(m) => m.as_slice().iter().filter(|v| **v != 0.0).count(),
            DataMatrix::Sparse(m) => m.nnz(),
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> RowView<'_> {
        match self {
            DataMatrix::Dense(m) => RowView::Dense(m.row(i)),
            DataMatrix::Sparse(m) => {
                let (idx, vals) = m.row(i);
                RowView::Sparse(idx, vals)
            }
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            DataMatrix::Dense(m) => m.clone(),
            DataMatrix::Sparse(m) => m.to_dense(),
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> DataMatrix {
        match self {
            DataMatrix::Dense(m) => DataMatrix::Dense(m.select_rows(idx)),
            DataMatrix::Sparse(m) => DataMatrix::Sparse(m.select_rows(idx)),
        }
    }

    /// `X w`.
    pub fn matvec(&self, w: &[f64]) -> Result<Vec<f64>> {
        match self {
            DataMatrix::Dense(m) => m.matvec(w),
            DataMatrix::Sparse(m) => m.matvec(w),
        }
    }

    /// Row Gram matrix `X Xᵀ`.
    pub fn gram(&self) -> DenseMatrix {
        match self {
            DataMatrix::Dense(m) => m.gram(),
            DataMatrix::Sparse(_) => {
                let n = self.rows();
                let mut g = DenseMatrix::zeros(n, n);
                for i in 0..n {
                    let ri = self.row(i);
                    for j in 0..=i {
                        let v = ri.dot_row(&self.row(j));
                        g.set(i, j, v);
                        g.set(j, i, v);
                    }
                }
                g
            }
        }
    }

    /// Errors unless every stored value is finite.
    pub fn check_finite(&self) -> Result<()> {
        let ok = match self {
            DataMatrix::Dense(m) => m.is_finite(),
            DataMatrix::Sparse(m) => (0..m.rows()).all(|i| m.row(i).1.iter().all(|v| v.is_finite())),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid("feature matrix has non-finite entries"))
        }
    }
}

impl From<DenseMatrix> for DataMatrix {
    fn from(m: DenseMatrix) -> Self {
        DataMatrix::Dense(m)
    }
}

impl From<SparseMatrix> for DataMatrix {
    fn from(m: SparseMatrix) -> Self {
        DataMatrix::Sparse(m)
    }
}
