use serde::{Deserialize, Serialize};

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::linalg::{svd_thin, DenseMatrix, SvdFactors, DEFAULT_RANK_TOL};
use crate::sketch::{SketchKind, SketchOperator};

/// Largest tolerated `‖VᵀV − I‖_max` for a basis passed to [`spectral_discrepancy`].
pub const ORTHONORMAL_TOL: f64 = 1e-6;

/// `‖VᵀV − VᵀRRᵀV‖₂` for one sketch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyResult {
    pub e_norm: f64,
    pub rho: usize,
    pub r: usize,
    pub kind: SketchKind,
    pub seed: u64,
}

/// Measures how far `R` is from an isometry on the column span of `v` (d×ρ).
///
/// `VᵀR` is obtained by sketching the rows of `Vᵀ`, so `R` is never formed.
/// The norm of the small symmetric ρ×ρ result is taken from a Jacobi SVD.
pub fn spectral_discrepancy(v: &DenseMatrix, op: &SketchOperator) -> Result<DiscrepancyResult> {
    if v.rows() != op.input_dim() {
        return Err(Error::mismatch(format!(
            "basis has {} rows, sketch expects dimension {}",
            v.rows(),
            op.input_dim()
        )));
    }
    let vt = v.transpose();
    let vtv = vt.gram();
    let rho = v.cols();
    let off = vtv.sub(&DenseMatrix::identity(rho))?.max_abs();
    if off > ORTHONORMAL_TOL {
        return Err(Error::invalid(format!(
            "basis is not orthonormal: max |VᵀV − I| = {off:.3e}"
        )));
    }
    let (vtr, _) = op.apply(&DataMatrix::Dense(vt))?;
    let e = vtv.sub(&vtr.gram())?;
    Ok(DiscrepancyResult {
        e_norm: symmetric_norm(&e)?,
        rho,
        r: op.output_dim(),
        kind: op.kind(),
        seed: op.seed(),
    })
}

/// Discrepancy on the row space of `x`: SVD first, then [`spectral_discrepancy`] on `V`.
pub fn data_discrepancy(x: &DataMatrix, op: &SketchOperator) -> Result<(DiscrepancyResult, SvdFactors)> {
    let svd = svd_thin(&x.to_dense(), DEFAULT_RANK_TOL)?;
    let res = spectral_discrepancy(&svd.v, op)?;
    Ok((res, svd))
}

fn symmetric_norm(e: &DenseMatrix) -> Result<f64> {
    if e.rows() == 0 || e.max_abs() == 0.0 {
        return Ok(0.0);
    }
    Ok(svd_thin(e, f64::EPSILON)?.sigma_max())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sketch::{build_sketch, Sampling};

    #[test]
    fn orthogonal_sketch_has_no_discrepancy() {
        let op = build_sketch(SketchKind::Srht(Sampling::WithoutReplacement), 8, 8, 5).unwrap();
        let e1 = DenseMatrix::from_fn(8, 1, |i, _| if i == 0 { 1.0 } else { 0.0 });
        assert!(spectral_discrepancy(&e1, &op).unwrap().e_norm <= 1e-10);
        assert!(spectral_discrepancy(&DenseMatrix::identity(8), &op).unwrap().e_norm <= 1e-10);
    }

    #[test]
    fn rejects_non_orthonormal_basis() {
        let op = build_sketch(SketchKind::Gaussian, 4, 4, 0).unwrap();
        let v = DenseMatrix::from_fn(4, 1, |_, _| 1.0);
        assert!(matches!(spectral_discrepancy(&v, &op), Err(Error::InvalidArgument(_))));
    }
}
