//! Identities satisfied by gradient Ricci solitons, evaluated on
//! [`SolitonPointData`]: the D-tensor and its norm chain, the curvature
//! derivative identities, eigenframe profiles, the Weitzenböck closure and
//! the quartic quantity whose sign controls half Weyl curvature.

mod data;
mod identities;

pub use data::{NablaRm, SolitonPointData};
pub use identities::{
    check_d_norm_chain, check_d_two_path, check_drift_laplacian, check_half_weyl_divergence, check_soliton_curvature,
    d_half, d_norm_terms, d_tensor, drift_inequality_rhs, eigen_profile, einstein_profile, frame_covariance_defect,
    half_weyl_gradient, quartic_from_curvature, quartic_quantity, weitzenbock_residual, weitzenbock_terms, DPath,
    IdentityReport, PARALLEL_TOLERANCE, ZERO_WEYL,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolitonError {
    #[error("curvature derivatives are unavailable ({0} needs ∇Rm)")]
    MissingDerivatives(&'static str),
    #[error("Einstein point: eigenframe undefined (|∇f| = {0:e})")]
    EinsteinPoint(f64),
    #[error("hypothesis violated: {what} (defect {defect:e})")]
    Hypothesis { what: &'static str, defect: f64 },
    #[error("unsupported configuration: {0}")]
    Unsupported(&'static str),
    #[error("outside the domain: {0}")]
    Domain(&'static str),
}
