use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::smo::{Qp, QpSolution};
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, DenseMatrix};

/// Solver stopping rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverParams {
    /// Stop once the maximal pairwise KKT violation drops below this.
    pub tol: f64,
    /// Cap on pair updates.
    pub max_iter: u64,
    /// Keep the dual objective after every update in [`SvmModel::objective_trace`].
    #[serde(default)]
    pub record_trace: bool,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams { tol: 1e-6, max_iter: 10_000_000, record_trace: false }
    }
}

impl SolverParams {
    pub fn with_tol(tol: f64) -> Self {
        SolverParams { tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::invalid(format!("tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Classification,
    Regression,
}

/// Soft-margin classification: `X`, labels in `{−1, +1}`, box bound `C`.
#[derive(Debug, Clone, Copy)]
pub struct SvcProblem<'a> {
    pub x: &'a DataMatrix,
    pub y: &'a [f64],
    pub c: f64,
}

/// ε-insensitive regression: `X`, real targets, box bound `C`, tube half-width.
#[derive(Debug, Clone, Copy)]
pub struct SvrProblem<'a> {
    pub x: &'a DataMatrix,
    pub y: &'a [f64],
    pub c: f64,
    pub tube_epsilon: f64,
}

/// A trained linear model with its dual certificate.
///
/// `alphas` are the dual variables in the signed form: nonnegative for
/// classification, in `[−C, C]` for regression. `w = Σ yᵢαᵢxᵢ` or `Σ αᵢxᵢ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub kind: Task,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tube_epsilon: Option<f64>,
    pub alphas: Vec<f64>,
    pub w: Vec<f64>,
    pub bias: f64,
    /// `1/‖w‖`, absent when `w = 0`.
    pub gamma: Option<f64>,
    /// Dual objective (maximization form) at termination.
    pub objective: f64,
    pub kkt_violation: f64,
    pub support_indices: Vec<usize>,
    pub iterations: u64,
    pub converged: bool,
    pub train_time: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub objective_trace: Vec<f64>,
}

impl SvmModel {
    /// `X w + b`.
    pub fn predict(&self, x: &DataMatrix) -> Result<Vec<f64>> {
        if x.cols() != self.w.len() {
            return Err(Error::mismatch(format!(
                "model has {} weights, data has {} columns",
                self.w.len(),
                x.cols()
            )));
        }
        Ok((0..x.rows()).map(|i| x.row(i).dot(&self.w) + self.bias).collect())
    }

    /// Geometric margin `1/‖w‖`.
    pub fn margin(&self) -> Result<f64> {
        margin(&self.w)
    }

    pub fn w_norm_sq(&self) -> f64 {
        dot(&self.w, &self.w)
    }
}

/// `1/‖w‖₂`.
pub fn margin(w: &[f64]) -> Result<f64> {
    let n = norm2(w);
    if n > 0.0 {
        Ok(1.0 / n)
    } else {
        Err(Error::UndefinedMargin)
    }
}

pub fn predict(model: &SvmModel, x: &DataMatrix) -> Result<Vec<f64>> {
    model.predict(x)
}

pub fn train_svc(p: SvcProblem<'_>, params: SolverParams) -> Result<SvmModel> {
    check_svc(p.x, p.y)?;
    let gram = p.x.gram();
    train_svc_with_gram(p, &gram, params)
}

/// Like [`train_svc`] with a precomputed `X Xᵀ`, so cross-validation can
/// slice one Gram matrix instead of recomputing it per fold.
pub fn train_svc_with_gram(p: SvcProblem<'_>, gram: &DenseMatrix, params: SolverParams) -> Result<SvmModel> {
    let start = Instant::now();
    params.validate()?;
    check_c(p.c)?;
    check_svc(p.x, p.y)?;
    check_gram(gram, p.x.rows())?;
    let n = p.y.len();
    let qp = Qp { kernel: gram, z: p.y.to_vec(), p: vec![-1.0; n], c: p.c };
    let sol = qp.solve(params.tol, params.max_iter, params.record_trace);
    let alphas = sol.beta.clone();
    let coef: Vec<f64> = alphas.iter().zip(p.y).map(|(a, y)| a * y).collect();
    let objective = alphas.iter().sum::<f64>() - 0.5 * quad_form(gram, &coef);
    Ok(finish(Task::Classification, p.x, p.c, None, alphas, &coef, objective, sol, start))
}

pub fn train_svr(p: SvrProblem<'_>, params: SolverParams) -> Result<SvmModel> {
    check_svr(p.x, p.y, p.tube_epsilon)?;
    let gram = p.x.gram();
    train_svr_with_gram(p, &gram, params)
}

pub fn train_svr_with_gram(p: SvrProblem<'_>, gram: &DenseMatrix, params: SolverParams) -> Result<SvmModel> {
    let start = Instant::now();
    params.validate()?;
    check_c(p.c)?;
    check_svr(p.x, p.y, p.tube_epsilon)?;
    check_gram(gram, p.x.rows())?;
    let n = p.y.len();
    let eps = p.tube_epsilon;
    let z: Vec<f64> = (0..2 * n).map(|t| if t < n { 1.0 } else { -1.0 }).collect();
    let lin: Vec<f64> = (0..2 * n)
        .map(|t| if t < n { eps - p.y[t] } else { eps + p.y[t - n] })
        .collect();
    let qp = Qp { kernel: gram, z, p: lin, c: p.c };
    let sol = qp.solve(params.tol, params.max_iter, params.record_trace);
    let alphas: Vec<f64> = (0..n).map(|i| sol.beta[i] - sol.beta[n + i]).collect();
    let objective = dot(p.y, &alphas)
        - eps * alphas.iter().map(|a| a.abs()).sum::<f64>()
        - 0.5 * quad_form(gram, &alphas);
    let coef = alphas.clone();
    Ok(finish(Task::Regression, p.x, p.c, Some(eps), alphas, &coef, objective, sol, start))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    kind: Task,
    x: &DataMatrix,
    c: f64,
    tube_epsilon: Option<f64>,
    alphas: Vec<f64>,
    coef: &[f64],
    objective: f64,
    sol: QpSolution,
    start: Instant,
) -> SvmModel {
    let mut w = vec![0.0; x.cols()];
    for (i, &ci) in coef.iter().enumerate() {
        if ci != 0.0 {
            x.row(i).axpy_into(ci, &mut w);
        }
    }
    let gamma = margin(&w).ok();
    let support_indices = alphas.iter().enumerate().filter(|(_, a)| **a != 0.0).map(|(i, _)| i).collect();
    // traces are recorded in minimization form
    let objective_trace = sol.trace.iter().map(|v| -v).collect();
    SvmModel {
        kind,
        c,
        tube_epsilon,
        alphas,
        w,
        bias: -sol.rho,
        gamma,
        objective,
        kkt_violation: sol.gap.max(0.0),
        support_indices,
        iterations: sol.iterations,
        converged: sol.converged,
        train_time: start.elapsed().as_secs_f64(),
        objective_trace,
    }
}

fn quad_form(k: &DenseMatrix, v: &[f64]) -> f64 {
    (0..v.len())
        .filter(|&i| v[i] != 0.0)
        .map(|i| v[i] * dot(k.row(i), v))
        .sum()
}

fn check_c(c: f64) -> Result<()> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("C must be positive and finite, got {c}")))
    }
}

fn check_gram(gram: &DenseMatrix, n: usize) -> Result<()> {
    if gram.rows() != n || gram.cols() != n {
        return Err(Error::mismatch(format!(
            "Gram matrix is {}x{}, expected {n}x{n}",
            gram.rows(),
            gram.cols()
        )));
    }
    Ok(())
}

fn check_common(x: &DataMatrix, y: &[f64]) -> Result<()> {
    if x.rows() != y.len() {
        return Err(Error::mismatch(format!("{} rows but {} targets", x.rows(), y.len())));
    }
    if y.is_empty() {
        return Err(Error::Empty("training set has no rows".into()));
    }
    x.check_finite()
        .map_err(|_| Error::invalid("features contain NaN or infinite values"))
}

fn check_svc(x: &DataMatrix, y: &[f64]) -> Result<()> {
    check_common(x, y)?;
    if let Some(bad) = y.iter().find(|v| **v != 1.0 && **v != -1.0) {
        return Err(Error::invalid(format!("classification labels must be -1 or +1, found {bad}")));
    }
    let pos = y.iter().filter(|v| **v > 0.0).count();
    if pos == 0 || pos == y.len() {
        return Err(Error::Degenerate("labels contain a single class".into()));
    }
    Ok(())
}

fn check_svr(x: &DataMatrix, y: &[f64], eps: f64) -> Result<()> {
    check_common(x, y)?;
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("targets contain NaN or infinite values"));
    }
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::invalid(format!("tube epsilon must be nonnegative, got {eps}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dm(rows: &[Vec<f64>]) -> DataMatrix {
        DenseMatrix::from_rows(rows).unwrap().into()
    }

    #[test]
    fn two_point_svc() {
        let x = dm(&[vec![1.0, 0.0], vec![-1.0, 0.0]]);
        let y = [1.0, -1.0];
        let m = train_svc(SvcProblem { x: &x, y: &y, c: 1000.0 }, SolverParams::with_tol(1e-12)).unwrap();
        assert!((m.alphas[0] - 0.5).abs() < 1e-12 && (m.alphas[1] - 0.5).abs() < 1e-12);
        assert!((m.w[0] - 1.0).abs() < 1e-12 && m.w[1].abs() < 1e-12);
        assert!((m.margin().unwrap() - 1.0).abs() < 1e-12);
        assert!((m.objective - 0.5).abs() < 1e-12);
        let pred = m.predict(&x).unwrap();
        assert!(pred[0] > 0.0 && pred[1] < 0.0);
    }

    #[test]
    fn two_point_svr() {
        let x = dm(&[vec![1.0], vec![-1.0]]);
        let y = [1.0, -1.0];
        let p = SvrProblem { x: &x, y: &y, c: 1000.0, tube_epsilon: 0.0 };
        let m = train_svr(p, SolverParams::with_tol(1e-12)).unwrap();
        assert!((m.alphas[0] - 0.5).abs() < 1e-12 && (m.alphas[1] + 0.5).abs() < 1e-12);
        assert!((m.w[0] - 1.0).abs() < 1e-12);
        assert!((m.objective - 0.5).abs() < 1e-12);
    }

    #[test]
    fn tiny_c_collapses_box() {
        let x = dm(&[vec![1.0, 2.0], vec![-1.0, 0.5], vec![0.3, -2.0]]);
        let y = [1.0, -1.0, -1.0];
        let m = train_svc(SvcProblem { x: &x, y: &y, c: 1e-12 }, SolverParams::default()).unwrap();
        assert!(m.alphas.iter().all(|a| *a <= 1e-12));
        assert!(m.objective.abs() < 1e-11);
    }

    #[test]
    fn wide_tube_gives_zero_alphas() {
        let x = dm(&[vec![1.0], vec![2.0], vec![3.0]]);
        let y = [0.7; 3];
        let p = SvrProblem { x: &x, y: &y, c: 1.0, tube_epsilon: 5.0 };
        let m = train_svr(p, SolverParams::default()).unwrap();
        assert!(m.alphas.iter().all(|a| *a == 0.0));
        assert_eq!(m.gamma, None);
        assert!(matches!(m.margin(), Err(Error::UndefinedMargin)));
    }

    #[test]
    fn margin_values() {
        assert_eq!(margin(&[1.0, 0.0]).unwrap(), 1.0);
        assert!((margin(&[3.0, 4.0]).unwrap() - 0.2).abs() < 1e-15);
        assert!(matches!(margin(&[0.0, 0.0]), Err(Error::UndefinedMargin)));
    }

    #[test]
    fn predict_is_primal_product() {
        let mut m = train_svc(
            SvcProblem { x: &dm(&[vec![1.0, 0.0], vec![-1.0, 0.0]]), y: &[1.0, -1.0], c: 10.0 },
            SolverParams::with_tol(1e-12),
        )
        .unwrap();
        m.bias = 0.0;
        assert!((m.predict(&dm(&[vec![2.0, 5.0]])).unwrap()[0] - 2.0).abs() < 1e-12);
        m.w = vec![0.0, 0.0];
        assert_eq!(m.predict(&dm(&[vec![2.0, 5.0]])).unwrap(), vec![0.0]);
        assert!(matches!(m.predict(&dm(&[vec![1.0]])), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let x = dm(&[vec![1.0], vec![2.0]]);
        let one_class = train_svc(SvcProblem { x: &x, y: &[1.0, 1.0], c: 1.0 }, SolverParams::default());
        assert!(matches!(one_class, Err(Error::Degenerate(_))));
        let bad_label = train_svc(SvcProblem { x: &x, y: &[1.0, 0.0], c: 1.0 }, SolverParams::default());
        assert!(matches!(bad_label, Err(Error::InvalidArgument(_))));
        let sparse = crate::linalg::SparseMatrix::from_rows(1, &[vec![(0, 1.0)], vec![(0, f64::NAN)]]);
        if let Ok(s) = sparse {
            let r = train_svc(SvcProblem { x: &s.into(), y: &[1.0, -1.0], c: 1.0 }, SolverParams::default());
            assert!(r.is_err());
        }
    }

    #[test]
    fn json_round_trip() {
        let x = dm(&[vec![1.0, 0.0], vec![-1.0, 0.0]]);
        let m = train_svc(SvcProblem { x: &x, y: &[1.0, -1.0], c: 1000.0 }, SolverParams::default()).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.contains("\"C\":1000.0") && json.contains("\"kind\":\"classification\""));
        let back: SvmModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }
}
