use serde::{Deserialize, Serialize};

use super::HermitianMatrix;
use crate::error::{Error, Result};

/// Relative asymmetry accepted by the loader before symmetrizing.
const SYMMETRY_TOL: f64 = 1e-9;

/// On-disk matrix object: `{"dim": d, "rows": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub rows: Vec<Vec<f64>>,
}

impl From<&HermitianMatrix> for MatrixJson {
    fn from(m: &HermitianMatrix) -> Self {
        Self {
            dim: m.dim(),
            rows: m.rows(),
        }
    }
}

impl MatrixJson {
    /// Validates shape and near-symmetry, then symmetrizes via `(M + Mᵀ)/2`.
    pub fn to_matrix(&self) -> Result<HermitianMatrix> {
        if self.dim == 0 {
            return Err(Error::Parse("matrix dimension must be at least 1".into()));
        }
        if self.rows.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: self.rows.len(),
            });
        }
        if let Some(row) = self.rows.iter().find(|r| r.len() != self.dim) {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: row.len(),
            });
        }
        if self.rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Parse("matrix entries must be finite".into()));
        }
        let n = self.dim;
        let raw = nalgebra::DMatrix::from_fn(n, n, |i, j| self.rows[i][j]);
        let asymmetry = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (raw[(i, j)] - raw[(j, i)]).abs())
            .fold(0.0_f64, f64::max);
        let norm = raw.clone().singular_values().max();
        if asymmetry > SYMMETRY_TOL * norm.max(1.0) {
            return Err(Error::NotSymmetric { asymmetry });
        }
        HermitianMatrix::new(raw)
    }
}

pub fn matrix_from_json(text: &str) -> Result<HermitianMatrix> {
    let parsed: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
    parsed.to_matrix()
}

pub fn matrix_to_json(m: &HermitianMatrix) -> String {
    crate::json::to_string(&MatrixJson::from(m))
}
