use serde::Serialize;

use crate::lattice::Vector;

/// Which direction a reported bound is guaranteed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
    Exact,
}

impl Side {
    /// The weaker of two sides; exact only if both are exact.
    pub fn meet(self, other: Side) -> Side {
        match (self, other) {
            (Side::Exact, s) | (s, Side::Exact) => s,
            (a, b) if a == b => a,
            _ => Side::Lower,
        }
    }
}

/// A one-sided (or exact) bound together with the data that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantEstimate {
    pub value: f64,
    pub side: Side,
    pub witness: Vec<Vector>,
    pub budget: usize,
    pub seed: u64,
}
