use super::kind::SketchKind;
use crate::error::{Error, Result};

/// Sampling-complexity estimate for `r` with every hidden constant set to 1
/// and natural logarithms, rounded up and clamped to at least 1.
///
/// * SRHT: `ρ ε⁻² · ln(ρd/δ) · ln(ρ ε⁻² δ⁻¹ ln(ρd/δ))`
/// * CW: `ρ ε⁻⁴ · ln(ρ/(δε)) · (ρ + ln(1/(δε)))`, with `ε ∈ (0, 1)`
/// * SIGN: `ρ ε⁻² · ln ρ · ln d` (no δ dependence)
/// * GAUSSIAN: `ρ ε⁻² · ln(ρ/δ)`
///
/// `d` is the original (unpadded) input dimension.
pub fn recommend_r(kind: SketchKind, rho: usize, d: usize, epsilon: f64, delta: f64) -> Result<usize> {
    if rho == 0 {
        return Err(Error::invalid("rank must be at least 1"));
    }
    if d == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let eps_max = if matches!(kind, SketchKind::Cw(_)) { 1.0 } else { 0.5 };
    let eps_ok = epsilon > 0.0 && (epsilon < eps_max || (eps_max == 0.5 && epsilon == 0.5));
    if !eps_ok {
        return Err(Error::invalid(format!("epsilon {epsilon} outside the admissible range")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("delta {delta} must lie in (0, 1)")));
    }
    let (rho, d) = (rho as f64, d as f64);
    let e2 = epsilon * epsilon;
    let value = match kind {
        SketchKind::Srht(_) => {
            let inner = (rho * d / delta).ln();
            rho / e2 * inner * (rho / e2 / delta * inner).ln()
        }
        SketchKind::Cw(_) => {
            rho / (e2 * e2) * (rho / (delta * epsilon)).ln() * (rho + (1.0 / (delta * epsilon)).ln())
        }
        SketchKind::Sign => rho / e2 * rho.ln() * d.ln(),
        SketchKind::Gaussian => rho / e2 * (rho / delta).ln(),
    };
    if !value.is_finite() {
        return Err(Error::Numerical(format!("sample-size formula overflowed: {value}")));
    }
    Ok((value.ceil() as usize).max(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_reference_value() {
        // 10 · 4 · ln 20 = 119.83
        assert_eq!(recommend_r(SketchKind::Gaussian, 10, 100, 0.5, 0.5).unwrap(), 120);
    }

    #[test]
    fn sign_rank_one_clamps() {
        assert_eq!(recommend_r(SketchKind::Sign, 1, 3, 0.5, 0.5).unwrap(), 1);
    }

    #[test]
    fn srht_reference_value() {
        // evaluated independently in a desk calculator: 18132.4395...
        assert_eq!(recommend_r(SketchKind::SRHT, 10, 1024, 0.25, 0.1).unwrap(), 18133);
    }

    #[test]
    fn cw_accepts_epsilon_up_to_one() {
        assert!(recommend_r(SketchKind::CW, 5, 100, 0.9, 0.1).is_ok());
        assert!(recommend_r(SketchKind::CW, 5, 100, 1.0, 0.1).is_err());
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(recommend_r(SketchKind::Gaussian, 10, 100, 0.6, 0.1).is_err());
        assert!(recommend_r(SketchKind::Gaussian, 10, 100, 0.0, 0.1).is_err());
        assert!(recommend_r(SketchKind::Gaussian, 10, 100, 0.5, 1.0).is_err());
        assert!(recommend_r(SketchKind::Gaussian, 0, 100, 0.5, 0.5).is_err());
    }
}
