use crate::error::{check_dim, invalid, Result};

use super::{NormedLattice, Vector};

/// A matrix between two normed lattices.
#[derive(Clone, Debug, PartialEq)]
pub struct LinOperator {
    matrix: Vec<Vec<f64>>,
    domain: NormedLattice,
    codomain: NormedLattice,
}

impl LinOperator {
    /// `matrix` is row-major with `codomain.dim()` rows and `domain.dim()` columns.
    pub fn new(matrix: Vec<Vec<f64>>, domain: NormedLattice, codomain: NormedLattice) -> Result<Self> {
        check_dim(codomain.dim(), matrix.len())?;
        for row in &matrix {
            check_dim(domain.dim(), row.len())?;
            if row.iter().any(|v| !v.is_finite()) {
                return invalid("matrix entries must be finite");
            }
        }
        Ok(LinOperator {
            matrix,
            domain,
            codomain,
        })
    }

    pub fn identity(x: NormedLattice) -> Self {
        let n = x.dim();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        LinOperator {
            matrix,
            domain: x.clone(),
            codomain: x,
        }
    }

    pub fn diagonal(g: &[f64], domain: NormedLattice, codomain: NormedLattice) -> Result<Self> {
        let n = g.len();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { g[i] } else { 0.0 }).collect())
            .collect();
        Self::new(matrix, domain, codomain)
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn domain(&self) -> &NormedLattice {
        &self.domain
    }

    pub fn codomain(&self) -> &NormedLattice {
        &self.codomain
    }

    pub fn apply(&self, x: &[f64]) -> Vector {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Transpose between the dual lattices.
    pub fn adjoint(&self) -> LinOperator {
        let rows = self.domain.dim();
        let cols = self.codomain.dim();
        let matrix = (0..rows)
            .map(|i| (0..cols).map(|j| self.matrix[j][i]).collect())
            .collect();
        LinOperator {
            matrix,
            domain: self.codomain.dual(),
            codomain: self.domain.dual(),
        }
    }

    pub fn scaled(&self, c: f64) -> LinOperator {
        LinOperator {
            matrix: self
                .matrix
                .iter()
                .map(|r| r.iter().map(|v| v * c).collect())
                .collect(),
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|v| *v == 0.0)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.len() == self.domain.dim()
            && self.matrix.iter().enumerate().all(|(i, r)| {
                r.iter()
                    .enumerate()
                    .all(|(j, v)| *v == if i == j { 1.0 } else { 0.0 })
            })
    }
}
