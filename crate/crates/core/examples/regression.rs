//! Epsilon-insensitive regression on projected low-rank data.

use rpsvm::data::DataMatrix;
use rpsvm::experiments::{generate_regression, metrics, RegressionSpec};
use rpsvm::sketch::{build_sketch, SketchKind};
use rpsvm::svm::{train_svr, SolverParams, SvrProblem, Task};

fn main() -> rpsvm::Result<()> {
    let spec = RegressionSpec { n: 120, d: 1024, rank: Some(10), noise: 0.1, seed: 5 };
    let (x, y) = generate_regression(&spec)?;
    let (train, test): (Vec<usize>, Vec<usize>) = (0..spec.n).partition(|i| i % 4 != 0);
    let pick = |m: &DataMatrix, idx: &[usize]| m.select_rows(idx);
    let targets = |idx: &[usize]| idx.iter().map(|&i| y[i]).collect::<Vec<_>>();
    let (y_train, y_test) = (targets(&train), targets(&test));

    let fit = |xs: &DataMatrix| -> rpsvm::Result<_> {
        let p = SvrProblem { x: &pick(xs, &train), y: &y_train, c: 1.0, tube_epsilon: 0.1 };
        let m = train_svr(p, SolverParams::default())?;
        let pred = m.predict(&pick(xs, &test))?;
        Ok((m.gamma, metrics(&pred, &y_test, Task::Regression)?))
    };

    let (g, m) = fit(&x)?;
    println!("full      gamma={g:.4?} mse={:.4} beta={:.3}", m.mse.unwrap(), m.beta.unwrap());
    for kind in SketchKind::ALL {
        let op = build_sketch(kind, x.cols(), 256, 9)?;
        let xs: DataMatrix = op.apply(&x)?.0.into();
        let (g, m) = fit(&xs)?;
        println!("{:<9} gamma={g:.4?} mse={:.4} beta={:.3}", kind.to_string(), m.mse.unwrap(), m.beta.unwrap());
    }
    Ok(())
}
