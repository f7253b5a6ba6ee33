use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::svm::Task;

/// Error measures for one set of predictions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    /// Percent misclassified by sign (classification only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_pct: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mse: Option<f64>,
    /// Squared Pearson correlation between predictions and targets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

pub fn metrics(pred: &[f64], truth: &[f64], task: Task) -> Result<MetricRecord> {
    if pred.len() != truth.len() {
        return Err(Error::mismatch(format!("{} predictions for {} targets", pred.len(), truth.len())));
    }
    if pred.is_empty() {
        return Err(Error::Empty("no predictions to score".into()));
    }
    Ok(match task {
        Task::Classification => MetricRecord {
            error_pct: Some(classification_error(pred, truth)),
            mse: None,
            beta: None,
        },
        Task::Regression => MetricRecord {
            error_pct: None,
            mse: Some(mse(pred, truth)),
            beta: Some(squared_correlation(pred, truth)?),
        },
    })
}

/// Percentage of positions where `sign(pred) ≠ truth`, with `sign(0) = +1`.
pub fn classification_error(pred: &[f64], truth: &[f64]) -> f64 {
    let wrong = pred
        .iter()
        .zip(truth)
        .filter(|(p, t)| (if **p >= 0.0 { 1.0 } else { -1.0 }) != **t)
        .count();
    100.0 * wrong as f64 / pred.len() as f64
}

pub fn mse(pred: &[f64], truth: &[f64]) -> f64 {
    pred.iter().zip(truth).map(|(p, t)| (p - t) * (p - t)).sum::<f64>() / pred.len() as f64
}

/// Squared Pearson correlation. Constant predictions give 0; constant targets are an error.
pub fn squared_correlation(pred: &[f64], truth: &[f64]) -> Result<f64> {
    let n = pred.len() as f64;
    let mp = pred.iter().sum::<f64>() / n;
    let mt = truth.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (p, t) in pred.iter().zip(truth) {
        let (a, b) = (p - mp, t - mt);
        sxy += a * b;
        sxx += a * a;
        syy += b * b;
    }
    if syy == 0.0 {
        return Err(Error::Degenerate("targets have zero variance; correlation is undefined".into()));
    }
    if sxx == 0.0 {
        return Ok(0.0);
    }
    Ok((sxy * sxy / (sxx * syy)).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_predictions() {
        let t = [1.0, -2.0, 0.5, 3.0];
        let m = metrics(&t, &t, Task::Regression).unwrap();
        assert_eq!(m.mse, Some(0.0));
        assert!((m.beta.unwrap() - 1.0).abs() < 1e-15);
        let c = metrics(&[0.3, -1.0], &[1.0, -1.0], Task::Classification).unwrap();
        assert_eq!(c.error_pct, Some(0.0));
    }

    #[test]
    fn negated_predictions() {
        let t = [1.0, -1.0, 2.0, -2.0];
        let p: Vec<f64> = t.iter().map(|v| -v).collect();
        let m = metrics(&p, &t, Task::Regression).unwrap();
        // var = 2.5 (population), mse = 4·var
        assert!((m.mse.unwrap() - 10.0).abs() < 1e-12);
        assert!((m.beta.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn five_value_hand_case() {
        // pred (1,2,3,4,6), truth (2,1,4,3,5): residuals ±1, sxy = 10, sxx = 14.8, syy = 10
        let p = [1.0, 2.0, 3.0, 4.0, 6.0];
        let t = [2.0, 1.0, 4.0, 3.0, 5.0];
        assert!((mse(&p, &t) - 1.0).abs() < 1e-15);
        assert!((squared_correlation(&p, &t).unwrap() - 100.0 / 148.0).abs() < 1e-12);
        assert!((classification_error(&[1.0, -1.0, 0.0, 2.0], &[1.0, 1.0, -1.0, 1.0]) - 50.0).abs() < 1e-12);
    }

    #[test]
    fn zero_variance_targets() {
        assert!(squared_correlation(&[1.0, 2.0], &[3.0, 3.0]).is_err());
        assert_eq!(squared_correlation(&[1.0, 1.0], &[3.0, 4.0]).unwrap(), 0.0);
    }
}
