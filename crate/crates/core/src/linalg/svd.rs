use super::dense::{dot, DenseMatrix};
use crate::error::{Error, Result};

/// Largest `min(rows, cols)` accepted by [`svd_thin`].
pub const SVD_DIM_CAP: usize = 4096;

/// Default relative rank threshold (relative to σ₁).
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 80;
const ORTH_TOL: f64 = 1e-15;

/// Thin SVD `A = U Σ Vᵀ` truncated to the numerical rank.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    /// n×ρ, orthonormal columns.
    pub u: DenseMatrix,
    /// Nonincreasing, all above `rank_tol · σ₁`.
    pub singular_values: Vec<f64>,
    /// d×ρ, orthonormal columns.
    pub v: DenseMatrix,
    pub rank: usize,
}

impl SvdFactors {
    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// `U Σ Vᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let mut us = self.u.clone();
        for i in 0..us.rows() {
            for (k, s) in self.singular_values.iter().enumerate() {
                let v = us.get(i, k) * s;
                us.set(i, k, v);
            }
        }
        us.matmul(&self.v.transpose()).expect("conforming")
    }
}

/// One-sided (Hestenes) Jacobi SVD, run on whichever orientation has fewer columns.
pub fn svd_thin(a: &DenseMatrix, rank_tol: f64) -> Result<SvdFactors> {
    if !(rank_tol > 0.0) {
        return Err(Error::invalid("rank_tol must be positive"));
    }
    let (n, d) = (a.rows(), a.cols());
    let k = n.min(d);
    if k > SVD_DIM_CAP {
        return Err(Error::Capacity(format!(
            "svd_thin supports min(rows, cols) <= {SVD_DIM_CAP}, got {k}; \
             use the Gram-matrix path for larger inputs"
        )));
    }
    if !a.is_finite() {
        return Err(Error::invalid("svd_thin input has non-finite entries"));
    }
    if k == 0 {
        return Ok(SvdFactors {
            u: DenseMatrix::zeros(n, 0),
            singular_values: vec![],
            v: DenseMatrix::zeros(d, 0),
            rank: 0,
        });
    }

    // Orthogonalize the columns of M = Aᵀ (wide) or M = A (tall); the rows of
    // `b` are the columns of M.
    let wide = n < d;
    let b = if wide { a.clone() } else { a.transpose() };
    let mut cols: Vec<Vec<f64>> = (0..b.rows()).map(|i| b.row(i).to_vec()).collect();
    let mut rot: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let mut e = vec![0.0; k];
            e[i] = 1.0;
            e
        })
        .collect();

    let scale: f64 = cols.iter().map(|c| dot(c, c)).sum();
    let tiny = 1e-26 * scale;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in (p + 1)..k {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                if alpha <= tiny || beta <= tiny {
                    continue;
                }
                let gamma = dot(&cols[p], &cols[q]);
                if gamma.abs() <= ORTH_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut cols, p, q, c, s);
                rotate_pair(&mut rot, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(usize, f64)> = cols.iter().map(|c| dot(c, c).sqrt()).enumerate().collect();
    order.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
    let sigma1 = order[0].1;
    let kept: Vec<(usize, f64)> = if sigma1 == 0.0 {
        vec![]
    } else {
        order.into_iter().filter(|&(_, s)| s > rank_tol * sigma1).collect()
    };
    let rank = kept.len();

    // Columns of M (the vectors in `cols`) satisfy M J = W, so M = (W/σ) Σ Jᵀ:
    // left vectors are cols[j]/σ_j, right vectors are the accumulated rot[j].
    let long_len = cols.first().map_or(0, Vec::len);
    let mut left = DenseMatrix::zeros(long_len, rank);
    let mut right = DenseMatrix::zeros(k, rank);
    for (out, &(j, s)) in kept.iter().enumerate() {
        for (i, v) in cols[j].iter().enumerate() {
            left.set(i, out, v / s);
        }
        for (i, v) in rot[j].iter().enumerate() {
            right.set(i, out, *v);
        }
    }
    let singular_values = kept.iter().map(|&(_, s)| s).collect();
    // wide: M = Aᵀ, so A = right Σ leftᵀ; tall: M = A
    let (u, v) = if wide { (right, left) } else { (left, right) };
    Ok(SvdFactors {
        u,
        singular_values,
        v,
        rank,
    })
}

fn rotate_pair(m: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = m.split_at_mut(q);
    let (x, y) = (&mut head[p], &mut tail[0]);
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let (u, v) = (*a, *b);
        *a = c * u - s * v;
        *b = s * u + c * v;
    }
}
