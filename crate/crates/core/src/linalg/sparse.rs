use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dense::{axpy, DenseMatrix};
use crate::error::{Error, Result};

/// Compressed sparse row matrix.
///
/// Column indices are strictly increasing within a row and no zero is stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Validates and wraps raw CSR arrays.
    pub fn from_csr(
        rows: usize,
        cols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if row_ptr.len() != rows + 1 || row_ptr[0] != 0 {
            return Err(Error::invalid("row_ptr must have rows+1 entries starting at 0"));
        }
        if row_ptr[rows] != col_idx.len() || col_idx.len() != values.len() {
            return Err(Error::invalid("row_ptr[rows] must equal nnz"));
        }
        for i in 0..rows {
            let (s, e) = (row_ptr[i], row_ptr[i + 1]);
            if s > e {
                return Err(Error::invalid(format!("row_ptr decreases at row {i}")));
            }
            let idx = &col_idx[s..e];
            if idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(format!(
                    "column indices not strictly increasing in row {i}"
                )));
            }
            if idx.last().is_some_and(|&c| c >= cols) {
                return Err(Error::invalid(format!("column index out of range in row {i}")));
            }
        }
        if values.iter().any(|v| *v == 0.0 || !v.is_finite()) {
            return Err(Error::invalid("stored values must be finite and nonzero"));
        }
        Ok(SparseMatrix {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Builds from per-row `(column, value)` lists; zeros are dropped.
    pub fn from_rows(cols: usize, rows: &[Vec<(usize, f64)>]) -> Result<Self> {
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for r in rows {
            for &(c, v) in r {
                if v != 0.0 {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self::from_csr(rows.len(), cols, row_ptr, col_idx, values)
    }

    pub fn from_dense(m: &DenseMatrix) -> Self {
        let mut row_ptr = vec![0];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for i in 0..m.rows() {
            for (j, &v) in m.row(i).iter().enumerate() {
                if v != 0.0 {
                    col_idx.push(j);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        SparseMatrix {
            rows: m.rows(),
            cols: m.cols(),
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            let (idx, vals) = self.row(i);
            let out = m.row_mut(i);
            for (&c, &v) in idx.iter().zip(vals) {
                out[c] = v;
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[s..e], &self.values[s..e])
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::mismatch(format!(
                "sparse matvec {}x{} by vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let (idx, vals) = self.row(i);
                idx.iter().zip(vals).map(|(&c, &v)| v * x[c]).sum()
            })
            .collect())
    }

    /// `self · other`; each stored nonzero is visited exactly once.
    pub fn mul_dense(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows() {
            return Err(Error::mismatch(format!(
                "sparse matmul {}x{} by {}x{}",
                self.rows,
                self.cols,
                other.rows(),
                other.cols()
            )));
        }
        let width = other.cols();
        let mut out = vec![0.0; self.rows * width];
        if width > 0 {
            out.par_chunks_mut(width).enumerate().for_each(|(i, out_row)| {
                let (idx, vals) = self.row(i);
                for (&c, &v) in idx.iter().zip(vals) {
                    axpy(v, other.row(c), out_row);
                }
            });
        }
        DenseMatrix::from_vec(self.rows, width, out)
    }

    pub fn select_rows(&self, idx: &[usize]) -> SparseMatrix {
        let mut row_ptr = Vec::with_capacity(idx.len() + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for &i in idx {
            let (c, v) = self.row(i);
            col_idx.extend_from_slice(c);
            values.extend_from_slice(v);
            row_ptr.push(col_idx.len());
        }
        SparseMatrix {
            rows: idx.len(),
            cols: self.cols,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Widens the column space; existing indices stay valid.
    pub fn with_cols(mut self, cols: usize) -> Result<Self> {
        if cols < self.cols {
            return Err(Error::invalid(format!(
                "cannot shrink column count from {} to {cols}",
                self.cols
            )));
        }
        self.cols = cols;
        Ok(self)
    }
}
