//! Oblivious random projections for linear support vector machines.
//!
//! A data matrix `X` (n×d) is projected to `X R` (n×r) with one of four
//! data-independent transforms, and a linear SVM is trained on the result.
//! The crate also measures how far a given projection is from an isometry on
//! the data's row space and checks the margin and enclosing-ball inequalities
//! that follow from it.
//!
//! ```
//! use rpsvm::data::DataMatrix;
//! use rpsvm::experiments::{generate_synthetic, SyntheticSpec};
//! use rpsvm::sketch::{build_sketch, SketchKind};
//! use rpsvm::svm::{train_svc, SolverParams, SvcProblem};
//!
//! let (x, y) = generate_synthetic(&SyntheticSpec { n: 30, d: 256, mu: 0.0, sigma: 1.0, seed: 1 })?;
//! let op = build_sketch(SketchKind::CW, x.cols(), 64, 7)?;
//! let xs: DataMatrix = op.apply(&x)?.0.into();
//! let model = train_svc(SvcProblem { x: &xs, y: &y, c: 1000.0 }, SolverParams::default())?;
//! assert!(model.margin()? > 0.0);
//! # Ok::<(), rpsvm::Error>(())
//! ```

pub mod cli;
pub mod data;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod sketch;
pub mod svm;

pub use error::{Error, Result};
