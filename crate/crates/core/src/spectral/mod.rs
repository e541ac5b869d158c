//! Sparse symmetric eigensolvers and spectral diagnostics.

mod friedman;
mod lanczos;
mod report;
mod test_vector;

pub use friedman::{extreme_nontrivial, friedman_check, FriedmanReport, FriedmanTrial};
pub use lanczos::{
    dense_spectrum, lanczos_largest, lanczos_smallest, EigenPairs, LanczosOptions, Negated, SymOp,
};
pub use report::{lanczos_topk, rayleigh_residual, SolverStats, SpectralReport};
pub use test_vector::{build_test_vector, default_t, TestVector, TestVectorResidual};
