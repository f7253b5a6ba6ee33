//! Approximate minimum enclosing balls before and after projection.

use rpsvm::experiments::{generate_regression, RegressionSpec};
use rpsvm::geometry::{min_enclosing_ball, verify_radius_bound, DEFAULT_APPROX_DELTA};
use rpsvm::sketch::{build_sketch, SketchKind};

fn main() -> rpsvm::Result<()> {
    let (x, _) = generate_regression(&RegressionSpec { n: 100, d: 256, rank: Some(10), noise: 0.0, seed: 1 })?;
    let ball = min_enclosing_ball(&x, DEFAULT_APPROX_DELTA)?;
    println!("radius {:.4} after {} rounds", ball.radius, ball.iterations);

    for kind in SketchKind::ALL {
        let op = build_sketch(kind, 256, 128, 7)?;
        let rc = verify_radius_bound(&x, &op, DEFAULT_APPROX_DELTA)?;
        println!(
            "{:<9} B~^2={:.4}  (1+|E_B|)B^2(1+delta)^3={:.4}  |E_B|={:.3}  ok={}",
            kind.to_string(),
            rc.check.lhs,
            rc.check.rhs,
            rc.e_b.e_norm,
            rc.check.satisfied
        );
    }
    Ok(())
}
