//! Embedding certificates into ℓ∞-sums of weak-L_p and the lower bounds that refute them.

mod c42;
mod t41;

pub use c42::{
    c42_bound, example54_closed_form, reproduce_example54, Bracket, CoveringFamily, Example54Report,
    LowerEstimateCheck,
};
pub use t41::{
    t41_check, EmbeddingCertificate, InfeasibleReport, SubsetMargin, T41Outcome, MARGIN_TOLERANCE, MAX_T41_DIM,
};
