//! Pointwise algebra of curvature-type tensors in an oriented orthonormal
//! frame of a four-dimensional inner product space.

mod decomposition;
mod duality;
mod half_weyl;
mod profile;
mod tensor;

pub use decomposition::{
    assemble_curvature, decompose, kn_product, metric, CurvaturePoint, Decomposition, Orientation,
};
pub use duality::{dual_pair, hodge_dual_pair, mixed_part, project_half, project_half3, Chirality, LAMBDA2_BASIS};
pub use half_weyl::{
    half_weyl_invariants, half_weyl_operator, interior_product, pair_ric_weyl, HalfWeyl, HalfWeylInvariants,
};
pub use profile::EigenProfile;
pub use tensor::{curvature_projection, inner3, inner4, FourTensor, SymmetryClass, ThreeTensor};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("index pair ({0}, {1}) is not two distinct indices in 0..4")]
    InvalidPair(usize, usize),
    #[error("tensor violates {property} (defect {defect:e})")]
    Symmetry { property: &'static str, defect: f64 },
    #[error("half Weyl eigenvalue triple must be trace free, sum is {0:e}")]
    NonzeroTrace(f64),
    #[error("frame is not orthonormal and positively oriented (defect {0:e})")]
    BadFrame(f64),
}

/// Tolerance used when validating symmetry classes on construction,
/// relative to the largest component.
pub(crate) const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Tolerance on `b₁ + b₂ + b₃` accepted by [`assemble_curvature`].
pub const TRACE_TOLERANCE: f64 = 1e-12;
