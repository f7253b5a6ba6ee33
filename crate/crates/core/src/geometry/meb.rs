use serde::{Deserialize, Serialize};

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

pub const DEFAULT_APPROX_DELTA: f64 = 0.01;

/// An enclosing ball whose radius is within `1 + approx_delta` of the minimum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MebResult {
    pub center: Vec<f64>,
    /// Largest distance from `center` to a data point.
    pub radius: f64,
    pub iterations: usize,
    pub approx_delta: f64,
    /// Convex weights with `center = Σ λᵢ xᵢ`.
    #[serde(skip)]
    pub weights: Vec<f64>,
}

/// Bădoiu–Clarkson: start at the first point and take `⌈1/δ²⌉ + 1` steps
/// `c ← c + (p − c)/(k + 1)` toward the current farthest point `p`.
///
/// The center is kept as convex weights over the rows and distances come
/// from the Gram matrix, so each step costs `O(n)` after an `O(n²d)` setup.
pub fn min_enclosing_ball(x: &DataMatrix, approx_delta: f64) -> Result<MebResult> {
    if x.rows() == 0 {
        return Err(Error::invalid("minimum enclosing ball of an empty set"));
    }
    if !(approx_delta > 0.0 && approx_delta <= 0.5) {
        return Err(Error::invalid(format!("approx_delta must lie in (0, 0.5], got {approx_delta}")));
    }
    x.check_finite()?;
    let gram = x.gram();
    let (weights, rounds) = core_set_weights(&gram, approx_delta);

    let mut center = vec![0.0; x.cols()];
    for (i, &l) in weights.iter().enumerate() {
        if l != 0.0 {
            x.row(i).axpy_into(l, &mut center);
        }
    }
    let radius = (0..x.rows())
        .map(|i| sq_dist(x, i, &center))
        .fold(0.0, f64::max)
        .sqrt();
    Ok(MebResult { center, radius, iterations: rounds, approx_delta, weights })
}

fn core_set_weights(k: &DenseMatrix, delta: f64) -> (Vec<f64>, usize) {
    let n = k.rows();
    let rounds = (1.0 / (delta * delta)).ceil() as usize + 1;
    let mut lambda = vec![0.0; n];
    lambda[0] = 1.0;
    // kl = K λ, cc = λᵀ K λ
    let mut kl: Vec<f64> = k.row(0).to_vec();
    let mut cc = k.get(0, 0);
    let mut best = (f64::INFINITY, lambda.clone());
    for step in 1..=rounds {
        let (far, r2) = (0..n)
            .map(|i| (i, k.get(i, i) - 2.0 * kl[i] + cc))
            .fold((0, f64::NEG_INFINITY), |acc, v| if v.1 > acc.1 { v } else { acc });
        if r2 < best.0 {
            best = (r2, lambda.clone());
        }
        if r2 <= 0.0 {
            break;
        }
        let t = 1.0 / (step as f64 + 1.0);
        let kp = k.row(far);
        cc = (1.0 - t) * (1.0 - t) * cc + 2.0 * t * (1.0 - t) * kl[far] + t * t * k.get(far, far);
        for (v, &kpv) in kl.iter_mut().zip(kp) {
            *v = (1.0 - t) * *v + t * kpv;
        }
        for l in lambda.iter_mut() {
            *l *= 1.0 - t;
        }
        lambda[far] += t;
    }
    let r2 = (0..n)
        .map(|i| k.get(i, i) - 2.0 * kl[i] + cc)
        .fold(f64::NEG_INFINITY, f64::max);
    if r2 < best.0 {
        best = (r2, lambda);
    }
    (best.1, rounds)
}

fn sq_dist(x: &DataMatrix, i: usize, c: &[f64]) -> f64 {
    let row = x.row(i);
    // ‖x‖² − 2 xᵀc + ‖c‖² loses precision when x ≈ c; subtract explicitly
    let mut diff = c.to_vec();
    row.axpy_into(-1.0, &mut diff);
    diff.iter().map(|v| v * v).sum()
}
