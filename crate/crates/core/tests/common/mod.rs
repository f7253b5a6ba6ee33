//! Reference implementations shared by the integration and acceptance tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rpsvm::linalg::DenseMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) }
}

/// Normalized Hadamard matrix from the doubling recursion
/// `H_2k = [[H, H], [H, -H]] / √2`.
pub fn hadamard_naive(d: usize) -> DenseMatrix {
    let mut h = vec![vec![1.0]];
    while h.len() < d {
        let k = h.len();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut next = vec![vec![0.0; 2 * k]; 2 * k];
        for i in 0..k {
            for j in 0..k {
                next[i][j] = s * h[i][j];
                next[i][j + k] = s * h[i][j];
                next[i + k][j] = s * h[i][j];
                next[i + k][j + k] = -s * h[i][j];
            }
        }
        h = next;
    }
    DenseMatrix::from_rows(&h).unwrap()
}

/// Exact dense `‖A‖₂` from the eigenvalues of the symmetric `AᵀA` by
/// cyclic Jacobi rotations, independent of the library's SVD.
pub fn spectral_norm_oracle(a: &DenseMatrix) -> f64 {
    let mut m = a.transpose().matmul(a).unwrap();
    let n = m.rows();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += m.get(p, q).powi(2);
            }
        }
        if off.sqrt() <= 1e-15 * m.frobenius().max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (m.get(q, q) - m.get(p, p)) / (2.0 * apq);
                let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m.get(k, p), m.get(k, q));
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, q, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let (mpk, mqk) = (m.get(p, k), m.get(q, k));
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(q, k, s * mpk + c * mqk);
                }
            }
        }
    }
    (0..n).map(|i| m.get(i, i)).fold(0.0, f64::max).max(0.0).sqrt()
}

/// A certified solution of a small SVM dual.
#[derive(Debug, Clone)]
pub struct OracleSolution {
    /// Dual objective in maximization form.
    pub dual: f64,
    /// Primal objective at the recovered `w` and best bias.
    pub primal: f64,
    pub iterations: usize,
}

impl OracleSolution {
    pub fn gap(&self) -> f64 {
        self.primal - self.dual
    }
}

/// Projection onto `{β : zᵀβ = 0, 0 ≤ β ≤ c}` for `z ∈ {±1}ⁿ`, by bisection
/// on the multiplier of the equality constraint.
fn project(v: &[f64], z: &[f64], c: f64, out: &mut [f64]) {
    let clip = |x: f64| x.clamp(0.0, c);
    let g = |lam: f64| -> f64 { v.iter().zip(z).map(|(vi, zi)| zi * clip(vi - lam * zi)).sum() };
    let span = v.iter().fold(0.0f64, |m, x| m.max(x.abs())) + c + 1.0;
    let (mut lo, mut hi) = (-span, span);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * span {
            break;
        }
    }
    let lam = 0.5 * (lo + hi);
    for ((o, vi), zi) in out.iter_mut().zip(v).zip(z) {
        *o = clip(vi - lam * zi);
    }
}

/// Convex piecewise-linear loss in the bias, minimized over its breakpoints.
fn best_bias(breakpoints: &[f64], loss: impl Fn(f64) -> f64) -> f64 {
    breakpoints.iter().map(|&b| loss(b)).fold(f64::INFINITY, f64::min)
}

/// Accelerated projected gradient on `min ½βᵀQβ + pᵀβ` with adaptive
/// restart. Stops once the primal objective at the recovered weights is
/// within `gap_tol` of the dual, or after `max_iter` steps.
fn fista(
    q: &DenseMatrix,
    p: &[f64],
    z: &[f64],
    c: f64,
    gap_tol: f64,
    max_iter: usize,
    primal: impl Fn(&[f64]) -> f64,
) -> OracleSolution {
    let m = p.len();
    let lip = (0..m).map(|i| (0..m).map(|j| q.get(i, j).abs()).sum::<f64>()).fold(0.0, f64::max).max(1e-12);
    let f = |b: &[f64]| -> f64 {
        let qb = q.matvec(b).unwrap();
        0.5 * b.iter().zip(&qb).map(|(x, y)| x * y).sum::<f64>() + b.iter().zip(p).map(|(x, y)| x * y).sum::<f64>()
    };
    let mut x = vec![0.0; m];
    let mut y = x.clone();
    let mut t = 1.0f64;
    let mut fx = f(&x);
    let mut step = vec![0.0; m];
    let mut next = vec![0.0; m];
    let mut best = OracleSolution { dual: -fx, primal: primal(&x), iterations: 0 };
    let mut pg_step = |from: &[f64], out: &mut [f64]| {
        let grad = q.matvec(from).unwrap();
        for i in 0..m {
            step[i] = from[i] - (grad[i] + p[i]) / lip;
        }
        project(&step, z, c, out);
    };
    for k in 1..=max_iter {
        pg_step(&y, &mut next);
        let mut f_next = f(&next);
        if f_next > fx {
            // momentum overshot: restart with a plain projected step from x
            t = 1.0;
            y.copy_from_slice(&x);
            pg_step(&y, &mut next);
            f_next = f(&next);
        }
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        for i in 0..m {
            y[i] = next[i] + (t - 1.0) / t_next * (next[i] - x[i]);
        }
        t = t_next;
        x.copy_from_slice(&next);
        fx = f_next;
        if k % 50 == 0 || k == max_iter {
            let sol = OracleSolution { dual: -fx, primal: primal(&x), iterations: k };
            if sol.gap() < best.gap() {
                best = sol;
            }
            if best.gap() <= gap_tol {
                break;
            }
        }
    }
    best
}

/// Classification dual `max Σα − ½ αᵀ(yyᵀ∘K)α`, `Σ yα = 0`, `0 ≤ α ≤ C`.
pub fn svc_oracle(x: &DenseMatrix, y: &[f64], c: f64, gap_tol: f64, max_iter: usize) -> OracleSolution {
    let n = x.rows();
    let k = x.gram();
    let q = DenseMatrix::from_fn(n, n, |i, j| y[i] * y[j] * k.get(i, j));
    let p = vec![-1.0; n];
    let primal = |beta: &[f64]| -> f64 {
        let coef: Vec<f64> = beta.iter().zip(y).map(|(b, yi)| b * yi).collect();
        let w = x.matvec_t(&coef).unwrap();
        let fx = x.matvec(&w).unwrap();
        let reg = 0.5 * w.iter().map(|v| v * v).sum::<f64>();
        let loss = |b: f64| -> f64 { fx.iter().zip(y).map(|(f, yi)| (1.0 - yi * (f + b)).max(0.0)).sum() };
        let bps: Vec<f64> = fx.iter().zip(y).map(|(f, yi)| yi - f).collect();
        reg + c * best_bias(&bps, loss)
    };
    fista(&q, &p, y, c, gap_tol, max_iter, primal)
}

/// Regression dual `max yᵀα − ε‖α‖₁ − ½αᵀKα`, `Σα = 0`, `|α| ≤ C`, as a
/// `2n` variable problem in `α = β⁺ − β⁻`.
pub fn svr_oracle(
    x: &DenseMatrix,
    y: &[f64],
    c: f64,
    tube: f64,
    gap_tol: f64,
    max_iter: usize,
) -> OracleSolution {
    let n = x.rows();
    let k = x.gram();
    let z: Vec<f64> = (0..2 * n).map(|i| if i < n { 1.0 } else { -1.0 }).collect();
    let q = DenseMatrix::from_fn(2 * n, 2 * n, |i, j| z[i] * z[j] * k.get(i % n, j % n));
    let p: Vec<f64> = (0..2 * n).map(|i| if i < n { tube - y[i] } else { tube + y[i - n] }).collect();
    let primal = |beta: &[f64]| -> f64 {
        let alpha: Vec<f64> = (0..n).map(|i| beta[i] - beta[i + n]).collect();
        let w = x.matvec_t(&alpha).unwrap();
        let fx = x.matvec(&w).unwrap();
        let reg = 0.5 * w.iter().map(|v| v * v).sum::<f64>();
        let loss = |b: f64| -> f64 { fx.iter().zip(y).map(|(f, yi)| ((f + b - yi).abs() - tube).max(0.0)).sum() };
        let bps: Vec<f64> = fx.iter().zip(y).flat_map(|(f, yi)| [yi - f - tube, yi - f + tube]).collect();
        reg + c * best_bias(&bps, loss)
    };
    fista(&q, &p, &z, c, gap_tol, max_iter, primal)
}
