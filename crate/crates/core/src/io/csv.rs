use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Dense comma-separated rows with the label or target in the first column.
/// A first line whose leading field is not numeric is taken as a header.
pub fn parse_dense_csv(path: impl AsRef<Path>) -> Result<(DenseMatrix, Vec<f64>)> {
    parse_dense_csv_str(&fs::read_to_string(path)?)
}

pub fn parse_dense_csv_str(text: &str) -> Result<(DenseMatrix, Vec<f64>)> {
    let mut labels = Vec::new();
    let mut data = Vec::new();
    let mut cols = None;
    let mut first = true;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split(',').map(str::trim).collect();
        if std::mem::take(&mut first) && fields[0].parse::<f64>().is_err() {
            continue;
        }
        let values = fields
            .iter()
            .map(|f| match f.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::Parse { line, msg: format!("field {f:?} is not a finite number") }),
            })
            .collect::<Result<Vec<f64>>>()?;
        match cols {
            None => cols = Some(values.len() - 1),
            Some(c) if c + 1 != values.len() => {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {} fields, found {}", c + 1, values.len()),
                });
            }
            _ => {}
        }
        labels.push(values[0]);
        data.extend_from_slice(&values[1..]);
    }
    let Some(cols) = cols else {
        return Err(Error::Empty("CSV input has no data rows".into()));
    };
    Ok((DenseMatrix::from_vec(labels.len(), cols, data)?, labels))
}

pub fn format_dense_csv(x: &DataMatrix, labels: &[f64]) -> Result<String> {
    if x.rows() != labels.len() {
        return Err(Error::mismatch(format!("{} rows but {} labels", x.rows(), labels.len())));
    }
    let dense = x.to_dense();
    let mut out = String::new();
    for (i, label) in labels.iter().enumerate() {
        let _ = write!(out, "{label:?}");
        for v in dense.row(i) {
            let _ = write!(out, ",{v:?}");
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_dense_csv(path: impl AsRef<Path>, x: &DataMatrix, labels: &[f64]) -> Result<()> {
    fs::write(path, format_dense_csv(x, labels)?)?;
    Ok(())
}
