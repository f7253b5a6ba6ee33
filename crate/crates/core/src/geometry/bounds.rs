use serde::{Deserialize, Serialize};

use super::discrepancy::{spectral_discrepancy, DiscrepancyResult};
use super::meb::{min_enclosing_ball, MebResult};
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::linalg::{svd_thin, DEFAULT_RANK_TOL};
use crate::sketch::SketchOperator;
use crate::svm::SvmModel;

/// Relative slack allowed before an inequality counts as violated.
pub const BOUND_REL_SLACK: f64 = 1e-9;

/// One inequality `lhs ≤ rhs`, evaluated on measured quantities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub bound_name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    /// `rhs − lhs`.
    pub slack: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_norm: Option<f64>,
}

impl BoundCheck {
    pub fn new(bound_name: &str, lhs: f64, rhs: f64) -> Self {
        let tol = BOUND_REL_SLACK * lhs.abs().max(rhs.abs());
        BoundCheck {
            bound_name: bound_name.to_string(),
            lhs,
            rhs,
            satisfied: lhs <= rhs + tol,
            slack: rhs - lhs,
            e_norm: None,
        }
    }

    fn with_e_norm(mut self, e: f64) -> Self {
        self.e_norm = Some(e);
        self
    }
}

/// Multiplier `1 − e/(1 − e)` on the squared margin.
pub fn margin_multiplier(e_norm: f64) -> Result<f64> {
    if !(e_norm >= 0.0) {
        return Err(Error::invalid(format!("discrepancy must be nonnegative, got {e_norm}")));
    }
    if e_norm >= 1.0 {
        return Err(Error::BoundVacuous { e_norm, limit: 1.0 });
    }
    Ok(1.0 - e_norm / (1.0 - e_norm))
}

/// `(1 + ε)/(1 − ε)`, the ratio factor quoted for the combined bound.
pub fn headline_ratio_multiplier(epsilon: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::BoundVacuous { e_norm: epsilon, limit: 1.0 });
    }
    Ok((1.0 + epsilon) / (1.0 - epsilon))
}

/// `γ̃² ≥ (1 − e/(1 − e)) γ²`, with `e` the measured discrepancy of the sketch
/// that produced `sketched`. Works for classification and regression models.
///
/// Recorded as `lhs = (1 − e/(1 − e)) γ²`, `rhs = γ̃²`.
pub fn verify_margin_bound(full: &SvmModel, sketched: &SvmModel, e_norm: f64) -> Result<BoundCheck> {
    for (name, m) in [("full", full), ("sketched", sketched)] {
        if !m.converged {
            return Err(Error::NotConverged(format!(
                "{name} model stopped at KKT violation {:.3e} after {} updates",
                m.kkt_violation, m.iterations
            )));
        }
    }
    if full.kind != sketched.kind {
        return Err(Error::invalid("margin bound compares models of different tasks"));
    }
    let mult = margin_multiplier(e_norm)?;
    let g = full.margin()?;
    let gt = sketched.margin()?;
    Ok(BoundCheck::new("margin", mult * g * g, gt * gt).with_e_norm(e_norm))
}

/// Result of [`verify_radius_bound`] with the intermediate quantities.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadiusCheck {
    pub check: BoundCheck,
    pub full: MebResult,
    pub sketched: MebResult,
    pub e_b: DiscrepancyResult,
}

/// `B̃² ≤ (1 + ‖E_B‖) B² (1 + δ)³`, where `E_B` is the discrepancy on the row
/// space of `X` augmented with the enclosing-ball center, and both radii come
/// from the approximate ball with parameter `δ`.
pub fn verify_radius_bound(x: &DataMatrix, op: &SketchOperator, approx_delta: f64) -> Result<RadiusCheck> {
    let full = min_enclosing_ball(x, approx_delta)?;
    let mut xb = x.to_dense();
    xb.push_row(&full.center)?;
    let e_b = if xb.max_abs() == 0.0 {
        DiscrepancyResult { e_norm: 0.0, rho: 0, r: op.output_dim(), kind: op.kind(), seed: op.seed() }
    } else {
        let svd = svd_thin(&xb, DEFAULT_RANK_TOL)?;
        spectral_discrepancy(&svd.v, op)?
    };
    let (xs, _) = op.apply(x)?;
    let sketched = min_enclosing_ball(&DataMatrix::Dense(xs), approx_delta)?;
    let slack = (1.0 + approx_delta).powi(3);
    let rhs = (1.0 + e_b.e_norm) * full.radius * full.radius * slack;
    let check = BoundCheck::new("radius", sketched.radius * sketched.radius, rhs).with_e_norm(e_b.e_norm);
    Ok(RadiusCheck { check, full, sketched, e_b })
}

/// `B̃²/γ̃² ≤ (1 + ε)(1 + δ)³ / (1 − ε/(1 − ε)) · B²/γ²` with `ε = max(e, e_B)`:
/// the product of the radius and margin inequalities.
pub fn verify_combined_bound(
    full: &SvmModel,
    sketched: &SvmModel,
    full_ball: &MebResult,
    sketched_ball: &MebResult,
    e_norm: f64,
    e_b_norm: f64,
) -> Result<BoundCheck> {
    let eps = e_norm.max(e_b_norm);
    let margin = margin_multiplier(eps)?;
    if margin <= 0.0 {
        return Err(Error::BoundVacuous { e_norm: eps, limit: 0.5 });
    }
    let delta = full_ball.approx_delta.max(sketched_ball.approx_delta);
    let mult = (1.0 + eps) * (1.0 + delta).powi(3) / margin;
    let ratio = |ball: &MebResult, m: &SvmModel| -> Result<f64> {
        let g = m.margin()?;
        Ok(ball.radius * ball.radius / (g * g))
    };
    let lhs = ratio(sketched_ball, sketched)?;
    let rhs = mult * ratio(full_ball, full)?;
    Ok(BoundCheck::new("combined", lhs, rhs).with_e_norm(eps))
}
