//! Solid convex bodies, the `C`/`D` sets of an operator, polarity, minimal
//! factorizations and Calderón interpolation of sets.

mod body;
mod cbody;
mod dset;
mod factorization;
mod interpolation;
mod polarity;

pub use body::SolidConvexBody;
pub use cbody::build_c_body;
pub use dset::{search_d_violation, DSearch, SPLIT_GRID_DIM};
pub use factorization::{
    build_minimal_factorization, FactorizationChecks, FactorizationKind, FactorizationTriple, FACTOR_TOLERANCE,
};
pub use interpolation::{interpolate_theta, interpolated_exponents, InterpolatedExponents, Interpolation, InterpolationCase};
pub use polarity::{verify_polarity, PolarityCandidate, PolarityReport, POLAR_SLACK, SAMPLING_SLACK};

