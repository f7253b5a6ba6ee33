//! A small cross-validated grid. The default configuration reproduces the
//! full table protocol; this one is cut down to run in seconds.

use rpsvm::experiments::{generate_synthetic, run_experiment, ExperimentConfig, SyntheticSpec};

fn main() -> rpsvm::Result<()> {
    let (x, y) = generate_synthetic(&SyntheticSpec { n: 120, d: 1024, mu: 0.0, sigma: 1.0, seed: 8 })?;
    let cfg = ExperimentConfig {
        r_values: vec![64, 128, 256],
        folds: 5,
        cv_reps: 2,
        seed_reps: 3,
        ..ExperimentConfig::default()
    };
    let report = run_experiment(&x, &y, &cfg)?;
    print!("{}", report.to_csv());
    eprint!("{}", report.timings_csv());
    Ok(())
}
