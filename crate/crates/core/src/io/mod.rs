//! LIBSVM and dense CSV datasets, and JSON run configuration.

mod config;
mod csv;
mod libsvm;

pub use config::{load_dataset, DataFormat, RunConfig};
pub use csv::{format_dense_csv, parse_dense_csv, parse_dense_csv_str, write_dense_csv};
pub use libsvm::{format_libsvm, parse_libsvm, parse_libsvm_str, write_libsvm};
