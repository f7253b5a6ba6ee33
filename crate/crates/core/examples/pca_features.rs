//! PCA projection as a data-dependent baseline. At full rank it keeps the
//! centered Gram matrix exactly.

use rpsvm::experiments::{center_columns, generate_regression, pca_features, RegressionSpec};

fn main() -> rpsvm::Result<()> {
    let (x, _) = generate_regression(&RegressionSpec { n: 40, d: 300, rank: Some(6), noise: 0.0, seed: 2 })?;
    let xc = center_columns(&x);
    let k_full = xc.gram();
    for k in [1, 2, 4, 6] {
        let z = pca_features(&x, k)?;
        let diff = k_full.max_abs_diff(&z.gram());
        println!("k={k}  max |XcXc^T - ZZ^T| = {diff:.3e}");
    }
    Ok(())
}
