//! JSON matrix files:
//!
//! ```json
//! {"n": 2, "kind": "hermitian", "real": [[0, 1], [1, 2]], "imag": [[0, -1], [1, 0]]}
//! ```
//!
//! `kind` is `hermitian` or `general`. General matrices may set `cols`
//! (default `n`); `imag` may be omitted for real matrices.

use std::fs;
use std::path::Path;

use relop::{HermitianMatrix, Matrix, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Absolute tolerance on max |m_ij − conj(m_ji)| for files declared Hermitian.
pub const HERMITIAN_FILE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Hermitian,
    General,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
    pub real: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imag: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Loaded {
    Hermitian(HermitianMatrix),
    General(Matrix),
}

impl Loaded {
    pub fn into_matrix(self) -> Matrix {
        match self {
            Self::Hermitian(h) => h.into_matrix(),
            Self::General(m) => m,
        }
    }
}

impl MatrixFile {
    pub fn from_matrix(m: &Matrix, kind: Kind) -> Self {
        let rows = m.rows();
        let cols = m.cols();
        let part = |f: fn(C64) -> f64| -> Vec<Vec<f64>> {
            (0..rows).map(|i| m.row(i).iter().map(|z| f(*z)).collect()).collect()
        };
        Self {
            n: rows,
            kind,
            cols: (kind == Kind::General && cols != rows).then_some(cols),
            real: part(|z| z.re),
            imag: Some(part(|z| z.im)),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("matrix file serializes");
        s.push('\n');
        s
    }

    /// Validates shape and, for Hermitian files, the residual.
    pub fn into_loaded(self, path: &Path) -> CliResult<Loaded> {
        let bad = |at: String, message: String| CliError::Parse {
            path: path.to_path_buf(),
            at,
            message,
        };
        let rows = self.n;
        let cols = match (self.kind, self.cols) {
            (Kind::Hermitian, Some(c)) if c != rows => {
                return Err(bad("cols".into(), format!("hermitian matrix must be square, got cols = {c}")));
            }
            (_, Some(c)) => c,
            (_, None) => rows,
        };
        if rows == 0 || cols == 0 {
            return Err(bad("n".into(), "matrix must be nonempty".into()));
        }
        check_shape(&self.real, rows, cols, "real").map_err(|(at, m)| bad(at, m))?;
        if let Some(imag) = &self.imag {
            check_shape(imag, rows, cols, "imag").map_err(|(at, m)| bad(at, m))?;
        }
        let m = Matrix::from_fn(rows, cols, |i, j| {
            let im = self.imag.as_ref().map_or(0.0, |v| v[i][j]);
            C64::new(self.real[i][j], im)
        });
        match self.kind {
            Kind::General => Ok(Loaded::General(m)),
            Kind::Hermitian => {
                for i in 0..rows {
                    for j in i..cols {
                        let r = (m[(i, j)] - m[(j, i)].conj()).norm();
                        if r > HERMITIAN_FILE_TOL {
                            return Err(bad(
                                format!("real/imag[{i}][{j}]"),
                                format!("declared hermitian but |m_ij - conj(m_ji)| = {r:e}"),
                            ));
                        }
                    }
                }
                Ok(Loaded::Hermitian(HermitianMatrix::hermitian_part(&m)))
            }
        }
    }
}

fn check_shape(v: &[Vec<f64>], rows: usize, cols: usize, name: &str) -> Result<(), (String, String)> {
    if v.len() != rows {
        return Err((name.into(), format!("expected {rows} rows, found {}", v.len())));
    }
    for (i, row) in v.iter().enumerate() {
        if row.len() != cols {
            return Err((format!("{name}[{i}]"), format!("expected {cols} columns, found {}", row.len())));
        }
    }
    Ok(())
}

pub fn parse_matrix_str(text: &str, path: &Path) -> CliResult<Loaded> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        CliError::Parse {
            path: path.to_path_buf(),
            at: format!("line {}, column {}", e.line(), e.column()),
            message: full.strip_suffix(&suffix).unwrap_or(&full).to_string(),
        }
    })?;
    file.into_loaded(path)
}

pub fn parse_matrix(path: &Path) -> CliResult<Loaded> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_matrix_str(&text, path)
}

pub fn read_hermitian(path: &Path) -> CliResult<HermitianMatrix> {
    match parse_matrix(path)? {
        Loaded::Hermitian(h) => Ok(h),
        Loaded::General(_) => Err(CliError::Parse {
            path: path.to_path_buf(),
            at: "kind".into(),
            message: "expected a hermitian matrix".into(),
        }),
    }
}

pub fn read_general(path: &Path) -> CliResult<Matrix> {
    Ok(parse_matrix(path)?.into_matrix())
}
