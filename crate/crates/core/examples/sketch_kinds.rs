//! Project a sparse matrix with each family and compare cost and distortion.

use rpsvm::data::DataMatrix;
use rpsvm::linalg::SparseMatrix;
use rpsvm::sketch::{build_sketch, SketchKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> rpsvm::Result<()> {
    let (n, d, r) = (500, 8192, 512);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|_| {
            let mut cols: Vec<usize> = (0..40).map(|_| rng.random_range(0..d)).collect();
            cols.sort_unstable();
            cols.dedup();
            cols.into_iter().map(|j| (j, rng.random_range(-1.0..1.0))).collect()
        })
        .collect();
    let x: DataMatrix = SparseMatrix::from_rows(d, &rows)?.into();

    println!("{n}x{d}, nnz = {}", x.nnz());
    println!("{:<10} {:>10} {:>12} {:>14}", "kind", "t_rp (ms)", "output nnz", "mean |ratio-1|");
    for kind in SketchKind::ALL {
        let op = build_sketch(kind, d, r, 42)?;
        let (xs, report) = op.apply(&x)?;
        // squared row norms before and after
        let distortion = (0..n)
            .map(|i| {
                let before = x.row(i).sq_norm();
                let after: f64 = xs.row(i).iter().map(|v| v * v).sum();
                (after / before - 1.0).abs()
            })
            .sum::<f64>()
            / n as f64;
        println!(
            "{:<10} {:>10.3} {:>12} {:>14.4}",
            kind.to_string(),
            report.t_rp * 1e3,
            report.output_nnz,
            distortion
        );
    }
    Ok(())
}
