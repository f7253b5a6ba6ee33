//! Synthetic data, cross-validated sketch-then-train grids, PCA features and
//! the error measures reported for them.

mod metrics;
mod pca;
mod runner;
mod synthetic;

pub use metrics::{classification_error, metrics, mse, squared_correlation, MetricRecord};
pub use pca::{center_columns, pca_features};
pub use runner::{
    cv_partition, metric, run_experiment, sketch_seed, CellSummary, ExperimentConfig, ExperimentReport, RunRecord,
    Stat, FULL, PRESET_C_REGRESSION, PRESET_C_SYNTHETIC, PRESET_C_TECHTC,
};
pub use synthetic::{generate_regression, generate_synthetic, Preset, RegressionSpec, SyntheticSpec};
