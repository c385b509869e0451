//! Convexity, concavity and estimate constants.

mod duality;
mod estimate;
mod kind;
mod reproduce;

pub use duality::{duality_gap, DualityGapReport, OracleValues, ORACLE_TOLERANCE};
pub use estimate::{estimate_constant, MAX_PARTITION_DIM};
pub(crate) use estimate::set_partitions;
pub use kind::{ratio, ConstantKind, KindRecord};
pub use reproduce::{
    a_n, alpha_sequence, check_q_convexity_bound, cyclic_family, gamma, lpinfty_lp_lattice, q_convexity_bound,
    renormed_q_convexity, reproduce_lpinfty_lp, GrowthRow, LpInftyLpReport, QConvexityReport, RenormedCheck,
};

