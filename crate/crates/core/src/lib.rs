//! Pointwise curvature algebra for oriented Riemannian four-manifolds, the
//! identities satisfied by gradient Ricci solitons, a small catalog of model
//! solitons with a coordinate curvature engine, and an exact-arithmetic
//! certifier for the quartic positivity inequality governing half Weyl
//! curvature on solitons with harmonic half Weyl tensor.
//!
//! Indices are zero-based throughout: a frame is `(e0, e1, e2, e3)` and the
//! orientation `e0 ∧ e1 ∧ e2 ∧ e3` is positive.

pub mod algebra;
pub mod certify;
pub mod geometry;
pub mod soliton;

pub use algebra::{Chirality, CurvaturePoint, EigenProfile, FourTensor, HalfWeyl, ThreeTensor};
pub use certify::{Certificate, RationalPoly};
pub use geometry::{MetricModel, ModelId};
pub use soliton::{IdentityReport, SolitonPointData};

/// Spatial dimension. Everything in this crate is specific to four.
pub const DIM: usize = 4;

/// Column vector in an orthonormal frame (or in coordinates).
pub type Vector4 = nalgebra::Vector4<f64>;

/// Symmetric two-tensor (Ricci, Hessian, metric) as a 4×4 matrix.
pub type Sym2 = nalgebra::Matrix4<f64>;
