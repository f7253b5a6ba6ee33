use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;

/// Reads `label idx:val idx:val ...` lines with 1-based, strictly increasing
/// indices. Blank lines and `#` comments are skipped. The column count is the
/// largest index seen unless `dim` is given.
pub fn parse_libsvm(path: impl AsRef<Path>, dim: Option<usize>) -> Result<(SparseMatrix, Vec<f64>)> {
    parse_libsvm_str(&fs::read_to_string(path)?, dim)
}

pub fn parse_libsvm_str(text: &str, dim: Option<usize>) -> Result<(SparseMatrix, Vec<f64>)> {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut max_index = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line, msg };
        let mut tokens = content.split_whitespace();
        let label_tok = tokens.next().expect("non-empty line has a token");
        let label: f64 = label_tok
            .parse()
            .map_err(|_| err(format!("label {label_tok:?} is not a number")))?;
        if !label.is_finite() {
            return Err(err(format!("label {label_tok:?} is not finite")));
        }
        let mut row = Vec::new();
        let mut last = 0usize;
        for tok in tokens {
            let (idx, val) = tok
                .split_once(':')
                .ok_or_else(|| err(format!("expected idx:val, found {tok:?}")))?;
            let idx: usize = idx.parse().map_err(|_| err(format!("bad feature index in {tok:?}")))?;
            if idx == 0 {
                return Err(err(format!("feature indices are 1-based, found {tok:?}")));
            }
            if idx <= last {
                return Err(err(format!("feature index {idx} does not increase (previous {last})")));
            }
            let val: f64 = val.parse().map_err(|_| err(format!("bad feature value in {tok:?}")))?;
            if !val.is_finite() {
                return Err(err(format!("feature value in {tok:?} is not finite")));
            }
            last = idx;
            if val != 0.0 {
                row.push((idx - 1, val));
            }
        }
        max_index = max_index.max(last);
        rows.push(row);
        labels.push(label);
    }
    if rows.is_empty() {
        return Err(Error::Empty("LIBSVM input has no data lines".into()));
    }
    let cols = match dim {
        Some(d) if d < max_index => {
            return Err(Error::invalid(format!("dimension {d} is smaller than the largest index {max_index}")));
        }
        Some(d) => d,
        None => max_index,
    };
    Ok((SparseMatrix::from_rows(cols, &rows)?, labels))
}

/// Inverse of [`parse_libsvm_str`]; values use the shortest round-trip form.
pub fn format_libsvm(x: &DataMatrix, labels: &[f64]) -> Result<String> {
    if x.rows() != labels.len() {
        return Err(Error::mismatch(format!("{} rows but {} labels", x.rows(), labels.len())));
    }
    let mut out = String::new();
    for (i, label) in labels.iter().enumerate() {
        let _ = write!(out, "{label}");
        match x.row(i) {
            crate::data::RowView::Dense(vals) => {
                for (j, v) in vals.iter().enumerate().filter(|(_, v)| **v != 0.0) {
                    let _ = write!(out, " {}:{v:?}", j + 1);
                }
            }
            crate::data::RowView::Sparse(idx, vals) => {
                for (j, v) in idx.iter().zip(vals) {
                    let _ = write!(out, " {}:{v:?}", j + 1);
                }
            }
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_libsvm(path: impl AsRef<Path>, x: &DataMatrix, labels: &[f64]) -> Result<()> {
    fs::write(path, format_libsvm(x, labels)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_line() {
        let (m, y) = parse_libsvm_str("+1 1:0.5 3:2.0\n", None).unwrap();
        assert_eq!(y, vec![1.0]);
        assert_eq!(m.to_dense().row(0), &[0.5, 0.0, 2.0]);
    }

    #[test]
    fn blank_lines_and_comments() {
        let (m, y) = parse_libsvm_str("\n-1 2:1 # note\n\n+1\n", Some(4)).unwrap();
        assert_eq!(y, vec![-1.0, 1.0]);
        assert_eq!((m.rows(), m.cols(), m.nnz()), (2, 4, 1));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("1 1:1\n1 3:1 2:1\n", 2),
            ("1 1:1\n\nx 1:1\n", 3),
            ("1 0:1\n", 1),
            ("1 1:abc\n", 1),
            ("1 1-2\n", 1),
            ("1 2:1 2:3\n", 1),
        ];
        for (text, want) in cases {
            match parse_libsvm_str(text, None) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn empty_input() {
        assert!(matches!(parse_libsvm_str("", None), Err(Error::Empty(_))));
        assert!(matches!(parse_libsvm_str("\n  \n", None), Err(Error::Empty(_))));
    }

    #[test]
    fn explicit_zero_is_dropped() {
        let (m, _) = parse_libsvm_str("1 1:0 2:3\n", None).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.cols(), 2);
    }
}
