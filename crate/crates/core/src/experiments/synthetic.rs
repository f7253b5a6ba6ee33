use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::linalg::{norm2, DenseMatrix};

/// Separable classification data: `w ~ N(mu, sigma)` per coordinate,
/// `ŵ = w/‖w‖`, `X ~ N(0, 1)`, `yᵢ = sign(ŵᵀxᵢ)` with `sign(0) = +1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n: usize,
    pub d: usize,
    pub mu: f64,
    pub sigma: f64,
    pub seed: u64,
}

/// Desk-scale versions of the three synthetic families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Preset {
    D1,
    D2,
    D3,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::D1, Preset::D2, Preset::D3];

    /// `(n, d, mu, sigma)`.
    pub fn shape(self) -> (usize, usize, f64, f64) {
        match self {
            Preset::D1 => (200, 2048, 0.0, 1.0),
            Preset::D2 => (250, 4096, 1.0, 1.5),
            Preset::D3 => (300, 8192, 2.0, 2.0),
        }
    }

    pub fn spec(self, seed: u64) -> SyntheticSpec {
        let (n, d, mu, sigma) = self.shape();
        SyntheticSpec { n, d, mu, sigma, seed }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::D1 => "d1",
            Preset::D2 => "d2",
            Preset::D3 => "d3",
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().trim_end_matches('\'') {
            "d1" => Ok(Preset::D1),
            "d2" => Ok(Preset::D2),
            "d3" => Ok(Preset::D3),
            other => Err(Error::invalid(format!("unknown preset {other:?} (expected d1, d2 or d3)"))),
        }
    }
}

impl SyntheticSpec {
    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.d == 0 {
            return Err(Error::invalid("synthetic data needs n >= 1 and d >= 1"));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite() && self.mu.is_finite()) {
            return Err(Error::invalid(format!("need finite mu and sigma > 0, got N({}, {})", self.mu, self.sigma)));
        }
        Ok(())
    }

    /// The unit-norm separating direction `ŵ`.
    pub fn direction(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        unit_direction(&mut rng, self.d, self.mu, self.sigma)
    }
}

fn unit_direction(rng: &mut ChaCha8Rng, d: usize, mu: f64, sigma: f64) -> Result<Vec<f64>> {
    let dist = Normal::new(mu, sigma).map_err(|e| Error::invalid(e.to_string()))?;
    let mut w: Vec<f64> = (0..d).map(|_| dist.sample(rng)).collect();
    let norm = norm2(&w);
    if norm == 0.0 {
        return Err(Error::Degenerate("sampled weight vector is zero".into()));
    }
    w.iter_mut().for_each(|v| *v /= norm);
    Ok(w)
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, n: usize, d: usize) -> DenseMatrix {
    let data = (0..n * d).map(|_| StandardNormal.sample(rng)).collect();
    DenseMatrix::from_vec(n, d, data).expect("gaussian entries are finite")
}

/// `(X, y)` for the spec; labels are exactly `±1`.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<(DataMatrix, Vec<f64>)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let w = unit_direction(&mut rng, spec.d, spec.mu, spec.sigma)?;
    let x = gaussian_matrix(&mut rng, spec.n, spec.d);
    let y = x
        .matvec(&w)?
        .into_iter()
        .map(|v| if v >= 0.0 { 1.0 } else { -1.0 })
        .collect();
    Ok((x.into(), y))
}

/// Regression data: `X = A B` with Gaussian factors of inner dimension `rank`
/// (or full Gaussian when `rank` is `None`), targets `ŵᵀxᵢ + U(−noise, noise)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionSpec {
    pub n: usize,
    pub d: usize,
    pub rank: Option<usize>,
    pub noise: f64,
    pub seed: u64,
}

pub fn generate_regression(spec: &RegressionSpec) -> Result<(DataMatrix, Vec<f64>)> {
    if spec.n == 0 || spec.d == 0 {
        return Err(Error::invalid("regression data needs n >= 1 and d >= 1"));
    }
    if !(spec.noise >= 0.0 && spec.noise.is_finite()) {
        return Err(Error::invalid(format!("noise must be nonnegative, got {}", spec.noise)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let w = unit_direction(&mut rng, spec.d, 0.0, 1.0)?;
    let x = match spec.rank {
        None => gaussian_matrix(&mut rng, spec.n, spec.d),
        Some(0) => return Err(Error::invalid("rank must be at least 1")),
        Some(k) => {
            let a = gaussian_matrix(&mut rng, spec.n, k);
            let mut b = gaussian_matrix(&mut rng, k, spec.d);
            b.scale(1.0 / (k as f64).sqrt());
            a.matmul(&b)?
        }
    };
    let mut y = x.matvec(&w)?;
    if spec.noise > 0.0 {
        for v in y.iter_mut() {
            *v += rng.random_range(-spec.noise..=spec.noise);
        }
    }
    Ok((x.into(), y))
}
