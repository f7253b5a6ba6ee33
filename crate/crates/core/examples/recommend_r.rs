//! Sample-size estimates for each family with all constants set to one.

use rpsvm::sketch::{recommend_r, SketchKind};

fn main() -> rpsvm::Result<()> {
    let d = 100_000;
    println!("d = {d}, delta = 0.1");
    println!("{:<9} {:>5} {:>12} {:>12}", "kind", "rho", "eps=0.5", "eps=0.25");
    for kind in SketchKind::ALL {
        for rho in [10, 50] {
            println!(
                "{:<9} {rho:>5} {:>12} {:>12}",
                kind.to_string(),
                recommend_r(kind, rho, d, 0.5, 0.1)?,
                recommend_r(kind, rho, d, 0.25, 0.1)?
            );
        }
    }
    Ok(())
}
