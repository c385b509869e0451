pub mod cli;
pub mod constants;
pub mod convexgeom;
pub mod embedcert;
pub mod error;
pub mod estimate;
pub mod exponent;
pub mod idealnorms;
pub mod lattice;
pub mod lorentz;
pub(crate) mod lp;
pub mod report;
pub mod search;
pub mod suites;

pub use error::{Error, Result};
pub use estimate::{ConstantEstimate, Side};
pub use exponent::Exponent;
pub use lattice::{LinOperator, NormSpec, NormedLattice, SymmetricSeqNorm, Vector};
