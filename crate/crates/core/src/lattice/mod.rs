//! Finite-dimensional vector lattices, their norms, duals and symmetric sequence norms.

mod document;
mod measure;
mod norm;
mod operator;
mod seqnorm;

pub use document::{lattice_from_json, lattice_to_json, load_lattice, parse_lattice};
pub(crate) use document::{field, number, number_list, object, only_keys, schema};
pub use measure::AtomicMeasure;
pub use norm::{eval_dual_norm, eval_norm, Evaluation, NormSpec, NormedLattice};
pub(crate) use norm::norming_vector;
pub use operator::LinOperator;
pub use seqnorm::{sigma_apply, sigma_dual, SymmetricSeqNorm};
pub(crate) use seqnorm::sigma_apply_unchecked;

/// A point of ℝⁿ.
pub type Vector = Vec<f64>;

pub fn modulus(x: &[f64]) -> Vector {
    x.iter().map(|v| v.abs()).collect()
}

pub fn join(x: &[f64], y: &[f64]) -> Vector {
    x.iter().zip(y).map(|(a, b)| a.max(*b)).collect()
}

pub fn meet(x: &[f64], y: &[f64]) -> Vector {
    x.iter().zip(y).map(|(a, b)| a.min(*b)).collect()
}

/// Pairing `⟨x,y⟩ = Σ x_i y_i`.
pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}
