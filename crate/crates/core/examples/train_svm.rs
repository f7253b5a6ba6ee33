//! Train on full and projected synthetic data and compare margins.

use rpsvm::data::DataMatrix;
use rpsvm::experiments::{classification_error, generate_synthetic, Preset};
use rpsvm::sketch::{build_sketch, SketchKind};
use rpsvm::svm::{train_svc, SolverParams, SvcProblem};

fn main() -> rpsvm::Result<()> {
    let (x, y) = generate_synthetic(&Preset::D1.spec(3))?;
    let params = SolverParams::default();
    let c = 1000.0;

    let full = train_svc(SvcProblem { x: &x, y: &y, c }, params)?;
    println!(
        "full d={:<5} gamma={:.4} support={:>3} iterations={}",
        x.cols(),
        full.margin()?,
        full.support_indices.len(),
        full.iterations
    );

    for r in [128, 256, 512, 1024] {
        let op = build_sketch(SketchKind::SRHT, x.cols(), r, 11)?;
        let xs: DataMatrix = op.apply(&x)?.0.into();
        let m = train_svc(SvcProblem { x: &xs, y: &y, c }, params)?;
        let train_err = classification_error(&m.predict(&xs)?, &y);
        println!(
            "srht r={r:<5} gamma={:.4} support={:>3} train error={train_err:.1}%",
            m.margin()?,
            m.support_indices.len()
        );
    }
    Ok(())
}
