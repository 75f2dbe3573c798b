//! JSON matrix files: `{"dim": n, "re": [[...]], "im": [[...]]}`, row-major,
//! both parts mandatory.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::ComplexMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        Self {
            dim: n,
            re: (0..n).map(|i| (0..n).map(|j| m[(i, j)].re).collect()).collect(),
            im: (0..n).map(|i| (0..n).map(|j| m[(i, j)].im).collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, Error> {
        if self.re.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: self.re.len(),
            });
        }
        ComplexMatrix::from_parts(&self.re, &self.im)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Invalid(#[from] Error),
}

pub fn read_matrix(text: &str) -> Result<ComplexMatrix, ReadError> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| ReadError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok(file.to_matrix()?)
}

pub fn write_matrix(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixFile::from_matrix(m)).expect("matrix serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cx;
    use proptest::prelude::*;

    #[test]
    fn reads_pauli_x() {
        let m = read_matrix(r#"{"dim": 2, "re": [[0, 1], [1, 0]], "im": [[0, 0], [0, 0]]}"#).unwrap();
        assert_eq!(m[(0, 1)], cx(1.0, 0.0));
        assert_eq!(m[(1, 1)], cx(0.0, 0.0));
    }

    #[test]
    fn reports_position_of_syntax_errors() {
        match read_matrix("{\"dim\": 2,\n \"re\": [[0, 1], [1, 0]\n") {
            Err(ReadError::Parse { line, .. }) => assert!(line >= 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            read_matrix(r#"{"dim": 2, "re": [[0, 1], [1, 0]]}"#),
            Err(ReadError::Parse { .. })
        ));
    }

    #[test]
    fn rejects_inconsistent_shapes() {
        assert!(matches!(
            read_matrix(r#"{"dim": 3, "re": [[0, 1], [1, 0]], "im": [[0, 0], [0, 0]]}"#),
            Err(ReadError::Invalid(Error::DimensionMismatch { .. }))
        ));
        assert!(matches!(
            read_matrix(r#"{"dim": 2, "re": [[0, 1], [1, 0]], "im": [[0, 0], [0]]}"#),
            Err(ReadError::Invalid(Error::DimensionMismatch { .. }))
        ));
    }

    proptest! {
        #[test]
        fn write_read_is_bit_exact(
            n in 1usize..5,
            vals in proptest::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 32),
        ) {
            let m = ComplexMatrix::from_fn(n, |i, j| cx(vals[(i * n + j) % 32], vals[(i * n + j + 16) % 32]));
            let text = write_matrix(&m);
            let back = read_matrix(&text).unwrap();
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(back[(i, j)].re.to_bits(), m[(i, j)].re.to_bits());
                    prop_assert_eq!(back[(i, j)].im.to_bits(), m[(i, j)].im.to_bits());
                }
            }
            prop_assert_eq!(write_matrix(&back), text);
        }
    }
}
