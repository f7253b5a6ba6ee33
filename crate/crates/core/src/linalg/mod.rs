//! Dense and CSR storage, the Walsh–Hadamard kernel, spectral norms and a
//! desk-scale Jacobi SVD.

mod dense;
mod fwht;
mod norm;
mod sparse;
mod svd;

pub use dense::{axpy, dot, norm2, DenseMatrix};
pub use fwht::{fwht_inplace, hadamard_entry};
pub(crate) use fwht::fwht_unnormalized;
pub use norm::{spectral_norm, spectral_norm_with, PowerIteration};
pub use sparse::SparseMatrix;
pub use svd::{svd_thin, SvdFactors, DEFAULT_RANK_TOL, SVD_DIM_CAP};
