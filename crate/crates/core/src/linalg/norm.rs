use super::dense::{dot, DenseMatrix};

/// Power iteration settings for [`spectral_norm_with`].
#[derive(Debug, Clone, Copy)]
pub struct PowerIteration {
    pub max_iter: usize,
    /// Stop when successive Rayleigh quotients differ by less than this, relatively.
    pub rel_tol: f64,
}

impl Default for PowerIteration {
    fn default() -> Self {
        PowerIteration {
            max_iter: 1000,
            rel_tol: 1e-9,
        }
    }
}

/// Largest singular value of `a`, by power iteration on `AᵀA`.
pub fn spectral_norm(a: &DenseMatrix) -> f64 {
    spectral_norm_with(a, PowerIteration::default())
}

pub fn spectral_norm_with(a: &DenseMatrix, cfg: PowerIteration) -> f64 {
    let n = a.cols();
    if a.rows() == 0 || n == 0 || a.max_abs() == 0.0 {
        return 0.0;
    }
    // all-ones start with a small index-dependent tilt, so the start is never
    // exactly orthogonal to the top singular vector for structured inputs
    let mut x: Vec<f64> = (0..n)
        .map(|j| 1.0 + 1e-3 * ((j * 7919 % 101) as f64 / 101.0 - 0.5))
        .collect();
    normalize(&mut x);

    let mut q_prev = f64::NAN;
    let mut q = 0.0;
    for _ in 0..cfg.max_iter {
        let ax = a.matvec(&x).expect("conforming");
        q = dot(&ax, &ax);
        if q == 0.0 {
            // start landed in the null space; fall back to a unit basis sweep
            return fallback_basis_max(a);
        }
        let mut y = a.matvec_t(&ax).expect("conforming");
        normalize(&mut y);
        x = y;
        if q_prev.is_finite() && (q - q_prev).abs() <= cfg.rel_tol * q {
            break;
        }
        q_prev = q;
    }
    q.sqrt()
}

fn fallback_basis_max(a: &DenseMatrix) -> f64 {
    (0..a.cols())
        .map(|j| a.column(j).iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

fn normalize(x: &mut [f64]) {
    let n = dot(x, x).sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
}
