//! Check the margin inequality on data whose row space is small enough for
//! the measured discrepancy to make it informative.

use rpsvm::data::DataMatrix;
use rpsvm::geometry::{data_discrepancy, verify_margin_bound};
use rpsvm::linalg::DenseMatrix;
use rpsvm::sketch::{build_sketch, Sampling, SketchKind};
use rpsvm::svm::{train_svc, SolverParams, SvcProblem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn main() -> rpsvm::Result<()> {
    // rank-4 data in R^512, labelled by a direction inside the row space
    let (n, d, k) = (60, 512, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut normal = || -> f64 { StandardNormal.sample(&mut rng) };
    let a = DenseMatrix::from_fn(n, k, |_, _| normal());
    let b = DenseMatrix::from_fn(k, d, |_, _| normal());
    let x = a.matmul(&b)?;
    let y: Vec<f64> = (0..n).map(|i| if a.get(i, 0) >= 0.0 { 1.0 } else { -1.0 }).collect();
    let x: DataMatrix = x.into();

    let params = SolverParams::with_tol(1e-8);
    let full = train_svc(SvcProblem { x: &x, y: &y, c: 1000.0 }, params)?;

    let kinds = [SketchKind::Srht(Sampling::WithoutReplacement), SketchKind::Gaussian, SketchKind::CW];
    for kind in kinds {
        let r = if matches!(kind, SketchKind::Srht(Sampling::WithoutReplacement)) { d } else { 256 };
        let op = build_sketch(kind, d, r, 4)?;
        let (disc, _) = data_discrepancy(&x, &op)?;
        let xs: DataMatrix = op.apply(&x)?.0.into();
        let sketched = train_svc(SvcProblem { x: &xs, y: &y, c: 1000.0 }, params)?;
        match verify_margin_bound(&full, &sketched, disc.e_norm) {
            Ok(c) => println!(
                "{:<16} r={r:<4} e={:.4} (1-e/(1-e))g^2={:.5} <= g~^2={:.5}: {}",
                kind.to_string(),
                disc.e_norm,
                c.lhs,
                c.rhs,
                c.satisfied
            ),
            Err(e) => println!("{:<16} r={r:<4} {e}", kind.to_string()),
        }
    }
    Ok(())
}
