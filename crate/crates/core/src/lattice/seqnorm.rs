use crate::error::{check_dim, invalid, Result};
use crate::exponent::{lp_norm, Exponent};

use super::Vector;

/// A symmetric normalized lattice norm on finite sequences: ℓ_p, `1 ≤ p ≤ ∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetricSeqNorm {
    pub p: Exponent,
}

impl SymmetricSeqNorm {
    pub fn lp(p: Exponent) -> Self {
        SymmetricSeqNorm { p }
    }

    pub fn ell(p: f64) -> Result<Self> {
        Ok(SymmetricSeqNorm { p: Exponent::new(p)? })
    }

    pub fn eval(&self, t: &[f64]) -> f64 {
        lp_norm(t, self.p.value())
    }

    pub fn dual(&self) -> Self {
        SymmetricSeqNorm {
            p: self.p.conjugate(),
        }
    }
}

/// Coordinatewise `σ(|x₁[j]|, …, |x_n[j]|)`.
pub fn sigma_apply(sigma: &SymmetricSeqNorm, xs: &[Vector]) -> Result<Vector> {
    let Some(first) = xs.first() else {
        return invalid("sigma_apply needs a nonempty family");
    };
    let dim = first.len();
    for x in xs {
        check_dim(dim, x.len())?;
    }
    Ok(sigma_apply_unchecked(sigma, xs, dim))
}

pub(crate) fn sigma_apply_unchecked(sigma: &SymmetricSeqNorm, xs: &[Vector], dim: usize) -> Vector {
    let mut col = vec![0.0; xs.len()];
    (0..dim)
        .map(|j| {
            for (c, x) in col.iter_mut().zip(xs) {
                *c = x[j];
            }
            sigma.eval(&col)
        })
        .collect()
}

pub fn sigma_dual(sigma: &SymmetricSeqNorm) -> SymmetricSeqNorm {
    sigma.dual()
}
