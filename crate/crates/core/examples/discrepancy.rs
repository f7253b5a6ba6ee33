//! How fast ||V^T V - V^T R R^T V|| shrinks as r grows, for a random
//! 8-dimensional subspace of R^1024.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rpsvm::geometry::spectral_discrepancy;
use rpsvm::linalg::{svd_thin, DenseMatrix, DEFAULT_RANK_TOL};
use rpsvm::sketch::{build_sketch, SketchKind};

fn main() -> rpsvm::Result<()> {
    let (d, rho) = (1024, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let g = DenseMatrix::from_fn(d, rho, |_, _| StandardNormal.sample(&mut rng));
    let v = svd_thin(&g, DEFAULT_RANK_TOL)?.u;

    print!("{:<10}", "r");
    let rs = [8, 16, 32, 64, 128, 256];
    for r in rs {
        print!("{r:>8}");
    }
    println!();
    for kind in SketchKind::ALL {
        print!("{:<10}", kind.to_string());
        for r in rs {
            let mut e: Vec<f64> = (0..15)
                .map(|s| Ok(spectral_discrepancy(&v, &build_sketch(kind, d, r, s)?)?.e_norm))
                .collect::<rpsvm::Result<_>>()?;
            e.sort_by(f64::total_cmp);
            print!("{:>8.3}", e[e.len() / 2]);
        }
        println!();
    }
    Ok(())
}
