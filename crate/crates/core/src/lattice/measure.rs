use serde::Serialize;

use crate::error::{invalid, Result};

/// A measure on finitely many atoms, given by strictly positive weights.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AtomicMeasure {
    weights: Vec<f64>,
}

impl AtomicMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return invalid("a measure needs at least one atom");
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return invalid(format!("atom weights must be finite and > 0, got {w}"));
        }
        Ok(AtomicMeasure { weights })
    }

    pub fn counting(n: usize) -> Self {
        AtomicMeasure {
            weights: vec![1.0; n.max(1)],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// True when all atoms carry the same weight.
    pub fn is_uniform(&self) -> bool {
        self.weights.iter().all(|w| *w == self.weights[0])
    }

    /// Measure of the atoms selected by `mask`.
    pub fn of(&self, mask: &[bool]) -> f64 {
        self.weights
            .iter()
            .zip(mask)
            .filter(|(_, m)| **m)
            .map(|(w, _)| w)
            .sum()
    }
}
