//! Pairwise working-set solver for
//!
//! ```text
//! min ½ βᵀQβ + pᵀβ   s.t.  zᵀβ = 0,  0 ≤ β ≤ C,   Q_ts = z_t z_s K[t mod n, s mod n]
//! ```
//!
//! which covers both the classification dual (`z = y`, `p = −1`) and the
//! split form of the regression dual (`β = [β⁺; β⁻]`, `z = [1; −1]`,
//! `p = [ε − y; ε + y]`).

use crate::linalg::DenseMatrix;

/// Curvature floor for non-positive-definite pairs.
const TAU: f64 = 1e-12;

pub(crate) struct Qp<'a> {
    pub kernel: &'a DenseMatrix,
    pub z: Vec<f64>,
    pub p: Vec<f64>,
    pub c: f64,
}

pub(crate) struct QpSolution {
    pub beta: Vec<f64>,
    /// Offset such that decision values are `Σ z β K − rho`.
    pub rho: f64,
    pub iterations: u64,
    pub converged: bool,
    /// Final maximal violation `m − M`.
    pub gap: f64,
    /// Minimization objective after every update, if recorded.
    pub trace: Vec<f64>,
}

impl Qp<'_> {
    fn q(&self, t: usize, s: usize) -> f64 {
        let n = self.kernel.rows();
        self.z[t] * self.z[s] * self.kernel.get(t % n, s % n)
    }

    fn objective(&self, beta: &[f64], grad: &[f64]) -> f64 {
        0.5 * beta.iter().zip(grad).zip(&self.p).map(|((b, g), p)| b * (g + p)).sum::<f64>()
    }

    fn in_up(&self, t: usize, beta: f64) -> bool {
        if self.z[t] > 0.0 {
            beta < self.c
        } else {
            beta > 0.0
        }
    }

    fn in_low(&self, t: usize, beta: f64) -> bool {
        if self.z[t] > 0.0 {
            beta > 0.0
        } else {
            beta < self.c
        }
    }

    /// First index: maximal violator in the upper set. Second index: the
    /// lower-set candidate with the largest second-order decrease of the
    /// objective. Ties resolve to the lowest index. Also returns `m − M`.
    fn select(&self, beta: &[f64], grad: &[f64]) -> (Option<usize>, Option<usize>, f64) {
        let mut i = None;
        let mut m = f64::NEG_INFINITY;
        for t in 0..beta.len() {
            let v = -self.z[t] * grad[t];
            if self.in_up(t, beta[t]) && v > m {
                m = v;
                i = Some(t);
            }
        }
        let Some(i) = i else {
            return (None, None, 0.0);
        };
        let n = self.kernel.rows();
        let ki = self.kernel.row(i % n);
        let kii = ki[i % n];
        let mut j = None;
        let mut big_m = f64::INFINITY;
        let mut best = f64::INFINITY;
        for t in 0..beta.len() {
            if !self.in_low(t, beta[t]) {
                continue;
            }
            let v = -self.z[t] * grad[t];
            if v < big_m {
                big_m = v;
            }
            let b = m - v;
            if b > 0.0 {
                let a = kii + self.kernel.get(t % n, t % n) - 2.0 * ki[t % n];
                let gain = -(b * b) / a.max(TAU);
                if gain < best {
                    best = gain;
                    j = Some(t);
                }
            }
        }
        (Some(i), j, m - big_m)
    }

    pub fn solve(&self, tol: f64, max_iter: u64, record_trace: bool) -> QpSolution {
        let l = self.z.len();
        let c = self.c;
        let mut beta = vec![0.0; l];
        let mut grad = self.p.clone();
        let mut trace = Vec::new();
        if record_trace {
            trace.push(0.0);
        }
        let mut iterations = 0;
        let mut gap;
        loop {
            let (sel_i, sel_j, g) = self.select(&beta, &grad);
            gap = g;
            if gap < tol || iterations >= max_iter {
                break;
            }
            let (Some(i), Some(j)) = (sel_i, sel_j) else {
                break;
            };
            iterations += 1;

            let (old_i, old_j) = (beta[i], beta[j]);
            let (qii, qjj, qij) = (self.q(i, i), self.q(j, j), self.q(i, j));
            if self.z[i] != self.z[j] {
                let quad = (qii + qjj + 2.0 * qij).max(TAU);
                let delta = (-grad[i] - grad[j]) / quad;
                let diff = beta[i] - beta[j];
                beta[i] += delta;
                beta[j] += delta;
                if diff > 0.0 {
                    if beta[j] < 0.0 {
                        beta[j] = 0.0;
                        beta[i] = diff;
                    }
                } else if beta[i] < 0.0 {
                    beta[i] = 0.0;
                    beta[j] = -diff;
                }
                if diff > 0.0 {
                    if beta[i] > c {
                        beta[i] = c;
                        beta[j] = c - diff;
                    }
                } else if beta[j] > c {
                    beta[j] = c;
                    beta[i] = c + diff;
                }
            } else {
                let quad = (qii + qjj - 2.0 * qij).max(TAU);
                let delta = (grad[i] - grad[j]) / quad;
                let sum = beta[i] + beta[j];
                beta[i] -= delta;
                beta[j] += delta;
                if sum > c {
                    if beta[i] > c {
                        beta[i] = c;
                        beta[j] = sum - c;
                    }
                } else if beta[j] < 0.0 {
                    beta[j] = 0.0;
                    beta[i] = sum;
                }
                if sum > c {
                    if beta[j] > c {
                        beta[j] = c;
                        beta[i] = sum - c;
                    }
                } else if beta[i] < 0.0 {
                    beta[i] = 0.0;
                    beta[j] = sum;
                }
            }

            let (di, dj) = (beta[i] - old_i, beta[j] - old_j);
            let n = self.kernel.rows();
            let (ki, kj) = (self.kernel.row(i % n), self.kernel.row(j % n));
            let (zi, zj) = (self.z[i] * di, self.z[j] * dj);
            for t in 0..l {
                grad[t] += self.z[t] * (zi * ki[t % n] + zj * kj[t % n]);
            }
            if record_trace {
                trace.push(self.objective(&beta, &grad));
            }
        }
        let converged = gap < tol;
        let rho = self.rho(&beta, &grad);
        QpSolution { beta, rho, iterations, converged, gap, trace }
    }

    fn rho(&self, beta: &[f64], grad: &[f64]) -> f64 {
        let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut free, mut sum_free) = (0usize, 0.0);
        for t in 0..beta.len() {
            let zg = self.z[t] * grad[t];
            let upper = beta[t] >= self.c;
            let lower = beta[t] <= 0.0;
            if (upper && self.z[t] < 0.0) || (lower && self.z[t] > 0.0) {
                ub = ub.min(zg);
            } else if upper || lower {
                lb = lb.max(zg);
            } else {
                free += 1;
                sum_free += zg;
            }
        }
        if free > 0 {
            sum_free / free as f64
        } else if ub.is_finite() && lb.is_finite() {
            0.5 * (ub + lb)
        } else {
            0.0
        }
    }
}
