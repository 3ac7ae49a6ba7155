//! Closed-form model solitons and a coordinate curvature engine: metric jets
//! by closed form or finite differences, Christoffel symbols, `Rm` and `∇Rm`
//! in an orthonormal frame adapted to `∇f`.

mod connection;
mod cp2;
mod jet;
mod model;
mod point;

pub use connection::{Array3, Array4, Array5, Connection};
pub use cp2::complex_space_form;
pub use jet::{DerivativeScheme, FdSteps, MetricJet, FD_STEP};
pub(crate) use model::splitmix64;
pub use model::{make_model, Chart, Factor, MetricModel, ModelId, Point, Potential, WarpedDiagonal};
pub use point::{
    christoffel, curvature_at, drift_laplacian, frame_at, kato_terms, soliton_point, soliton_residual, KatoTerms,
    PointFrame, GRADIENT_THRESHOLD,
};

use thiserror::Error;

use crate::algebra::AlgebraError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("unknown model `{0}` (expected gaussian, s3xr, s2xr2, s4_round or cp2_point)")]
    UnknownModel(String),
    #[error("lambda must be positive and finite, got {0}")]
    NonPositiveLambda(f64),
    #[error("point {point:?} lies outside the chart domain of `{model}`")]
    OutsideDomain { model: String, point: Point },
    #[error("metric is not positive definite at {0:?}")]
    SingularMetric(Point),
    #[error("model `{0}` is pointwise and has no chart")]
    Pointwise(String),
    #[error("derivative evaluation produced non-finite values at {0:?}")]
    DerivativeFailure(Point),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
