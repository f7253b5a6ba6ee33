//! Oblivious random projections `R ∈ ℝ^{d×r}` and their application `X̃ = X R`.
//!
//! Four families are provided:
//!
//! * **SRHT**, `√(d/r) · D H S`: random sign flips, the normalized
//!   Walsh–Hadamard transform over `d` padded to a power of two, and uniform
//!   column sampling with replacement. `O(d log d)` per row.
//! * **CW**: sparse embeddings applied in time proportional to the number of
//!   stored nonzeros. The default is CountSketch; a block mode follows the
//!   hashed, stacked-sub-block construction.
//! * **SIGN**: i.i.d. `±1/√r` entries.
//! * **GAUSSIAN**: i.i.d. `N(0, 1/r)` entries.
//!
//! All families satisfy `E[R Rᵀ] = I`. SIGN and GAUSSIAN entries are never
//! stored; row `j` of `R` is regenerated from `(seed, j)` on demand.

mod kind;
mod operator;
mod recommend;
mod rng;

pub use kind::{CwMode, Sampling, SketchKind};
pub use operator::{build_sketch, SketchDescriptor, SketchOperator, SketchReport, MATERIALIZE_CAP};
pub use recommend::recommend_r;

use crate::data::DataMatrix;
use crate::error::Result;
use crate::linalg::DenseMatrix;

/// `X̃ = X R`, with the projection time recorded in the report.
pub fn apply_sketch(op: &SketchOperator, x: &DataMatrix) -> Result<(DenseMatrix, SketchReport)> {
    op.apply(x)
}

/// Explicit `R` (d×r) for testing and inspection.
pub fn materialize(op: &SketchOperator) -> Result<DenseMatrix> {
    op.materialize()
}
