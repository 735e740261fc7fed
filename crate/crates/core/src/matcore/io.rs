//! JSON matrix files: `{"dim": n, "re": [[...]], "im": [[...]]}`, row-major,
//! `im` optional. Rectangular matrices use `"rows"`/`"cols"` instead of `dim`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::matrix::{GeneralMatrix, HermitianMatrix, C64};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<GeneralMatrix> {
        let rows = self.re.len();
        let cols = self.re.first().map_or(0, Vec::len);
        let (want_r, want_c) = match (self.dim, self.rows, self.cols) {
            (Some(d), None, None) => (d, d),
            (None, Some(r), Some(c)) => (r, c),
            (None, None, None) => (rows, cols),
            _ => {
                return Err(Error::invalid(
                    "matrix file needs either `dim` or both `rows` and `cols`",
                ))
            }
        };
        if rows != want_r || self.re.iter().any(|r| r.len() != want_c) {
            return Err(Error::shape(format!("`re` is not {want_r}x{want_c}")));
        }
        if let Some(im) = &self.im {
            if im.len() != want_r || im.iter().any(|r| r.len() != want_c) {
                return Err(Error::shape(format!("`im` is not {want_r}x{want_c}")));
            }
        }
        Ok(GeneralMatrix::from_fn(want_r, want_c, |i, j| {
            let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
            C64::new(self.re[i][j], im)
        }))
    }

    pub fn from_matrix(m: &GeneralMatrix) -> Self {
        let re = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m[(i, j)].re).collect())
            .collect();
        let has_im = m.as_slice().iter().any(|z| z.im != 0.0);
        let im = has_im.then(|| {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| m[(i, j)].im).collect())
                .collect()
        });
        let (dim, rows, cols) = if m.is_square() {
            (Some(m.rows()), None, None)
        } else {
            (None, Some(m.rows()), Some(m.cols()))
        };
        MatrixFile {
            dim,
            rows,
            cols,
            re,
            im,
        }
    }
}

pub fn matrix_from_json(value: serde_json::Value) -> Result<GeneralMatrix> {
    serde_json::from_value::<MatrixFile>(value)?.to_matrix()
}

/// Parses a Hermitian matrix, rejecting inputs that are not Hermitian to
/// within `1e-10` relative.
pub fn hermitian_from_json(value: serde_json::Value) -> Result<HermitianMatrix> {
    HermitianMatrix::new_checked(matrix_from_json(value)?, 1e-10)
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<GeneralMatrix> {
    let text = std::fs::read_to_string(path)?;
    matrix_from_json(serde_json::from_str(&text)?)
}

pub fn load_hermitian(path: impl AsRef<Path>) -> Result<HermitianMatrix> {
    let text = std::fs::read_to_string(path)?;
    hermitian_from_json(serde_json::from_str(&text)?)
}

pub fn to_json(m: &GeneralMatrix) -> serde_json::Value {
    serde_json::to_value(MatrixFile::from_matrix(m)).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn real_matrix_without_imaginary_part() {
        let m = hermitian_from_json(json!({"dim": 2, "re": [[1.0, 0.5], [0.5, 2.0]]})).unwrap();
        assert_eq!(m[(0, 1)], C64::new(0.5, 0.0));
    }

    #[test]
    fn complex_round_trip() {
        let m = GeneralMatrix::from_fn(2, 3, |i, j| C64::new(i as f64, j as f64 * 0.25));
        assert_eq!(matrix_from_json(to_json(&m)).unwrap(), m);
    }

    #[test]
    fn malformed_files_are_errors() {
        assert!(matrix_from_json(json!({"dim": 3, "re": [[1.0]]})).is_err());
        assert!(matrix_from_json(json!({"dim": 1, "re": [[1.0]], "im": [[1.0, 2.0]]})).is_err());
        assert!(matrix_from_json(json!({"dim": 1, "re": [[1.0]], "extra": 1})).is_err());
        assert!(hermitian_from_json(json!({"dim": 2, "re": [[1.0, 1.0], [0.0, 1.0]]})).is_err());
    }
}
