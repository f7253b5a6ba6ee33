use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::experiments::{ExperimentConfig, Preset};

use super::{parse_dense_csv, parse_libsvm};

/// On-disk dataset formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataFormat {
    Libsvm,
    Csv,
}

impl DataFormat {
    /// `.csv` means dense CSV, anything else LIBSVM.
    pub fn from_path(path: &Path) -> DataFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => DataFormat::Csv,
            _ => DataFormat::Libsvm,
        }
    }
}

/// Loads `(X, labels)` from a LIBSVM or dense CSV file.
pub fn load_dataset(path: &Path, format: Option<DataFormat>) -> Result<(DataMatrix, Vec<f64>)> {
    match format.unwrap_or_else(|| DataFormat::from_path(path)) {
        DataFormat::Libsvm => {
            let (x, y) = parse_libsvm(path, None)?;
            Ok((x.into(), y))
        }
        DataFormat::Csv => {
            let (x, y) = parse_dense_csv(path)?;
            Ok((x.into(), y))
        }
    }
}

/// A JSON run description. Experiment fields sit at the top level next to
/// the data source and output location; command-line flags override them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
#[derive(Default)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub format: Option<DataFormat>,
    /// Synthetic preset used when no input file is given.
    pub preset: Option<Preset>,
    pub output: Option<PathBuf>,
    #[serde(flatten)]
    pub experiment: ExperimentConfig,
}


impl RunConfig {
    pub fn from_json_str(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<RunConfig> {
        Self::from_json_str(&fs::read_to_string(path)?)
    }

    /// Checks that do not need the data.
    pub fn validate(&self) -> Result<()> {
        if self.input.is_some() && self.preset.is_some() {
            return Err(Error::invalid("give either an input file or a preset, not both"));
        }
        let e = &self.experiment;
        e.validate(e.folds.max(2))
    }
}
