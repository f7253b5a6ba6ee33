use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::linalg::{svd_thin, DenseMatrix, DEFAULT_RANK_TOL};

/// Column-centered data projected on its top `k` right singular vectors:
/// `Z = X_c V_k`.
pub fn pca_features(x: &DataMatrix, k: usize) -> Result<DenseMatrix> {
    let xc = center_columns(x);
    if k == 0 {
        return Err(Error::invalid("PCA needs k >= 1"));
    }
    if xc.max_abs() == 0.0 {
        return Err(Error::invalid(format!("k = {k} exceeds the numerical rank 0 of the centered data")));
    }
    let svd = svd_thin(&xc, DEFAULT_RANK_TOL)?;
    if k > svd.rank {
        return Err(Error::invalid(format!(
            "k = {k} exceeds the numerical rank {} of the centered data",
            svd.rank
        )));
    }
    xc.matmul(&svd.v.leading_cols(k))
}

/// `X` minus its per-column means.
pub fn center_columns(x: &DataMatrix) -> DenseMatrix {
    let mut xc = x.to_dense();
    let n = xc.rows() as f64;
    for j in 0..xc.cols() {
        let mean = (0..xc.rows()).map(|i| xc.get(i, j)).sum::<f64>() / n;
        for i in 0..xc.rows() {
            xc.set(i, j, xc.get(i, j) - mean);
        }
    }
    xc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_rows_have_rank_zero() {
        let x: DataMatrix = DenseMatrix::from_rows(&vec![vec![1.0, 2.0, 3.0]; 4]).unwrap().into();
        assert!(matches!(pca_features(&x, 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn points_on_a_line() {
        // centered points t·(3,4)/5 for t ∈ {−2, 0, 2}
        let x: DataMatrix = DenseMatrix::from_rows(&[vec![-1.2, -1.6], vec![0.0, 0.0], vec![1.2, 1.6]])
            .unwrap()
            .into();
        let z = pca_features(&x, 1).unwrap();
        let s = z.get(2, 0).signum();
        for (i, t) in [-2.0, 0.0, 2.0].iter().enumerate() {
            assert!((s * z.get(i, 0) - t).abs() < 1e-12);
        }
    }
}
