//! Exact certification of the quartic inequality
//! `R²|W±|² − 36R det W± + 4|W±|²|R̊c|² − R⟨(R̊c∘R̊c)±, W±⟩ ≥ 0`
//! over traceless Ricci eigenvalues, in rational arithmetic throughout.
//!
//! The quartic `φ` here is six times that expression, written in
//! `(R, a2, a3, a4)` with `a1 = −(a2 + a3 + a4)`. Each proof step is an exact
//! polynomial identity recorded by the hashes of both sides; sign conclusions
//! rest on perfect-square forms or on Sturm-sequence root isolation.

mod certificate;
mod phi;
mod poly;
mod proofs;
mod sampling;
mod univariate;

pub use certificate::{Certificate, Step, Verdict};
pub use phi::{
    a1, b_forms, classify_equality, invariant_forms, p_form, phi_at_floats, phi_eval, phi_from_invariants, phi_i128,
    phi_poly, q_form, rationalize, s_form, EqualityClass, I128_SAFE, PHI_SCALE, RATIONALIZE_CAP,
};
pub use poly::{rat, rational_string, Exponents, RationalPoly, Var};
pub use proofs::{
    a1_zero_certify, critical_point_certify, discriminant_certify, printed_partial, printed_quotient, q_sextic,
    quotient_form, timofte_factored, timofte_specialize, Family,
};
pub use sampling::{sample_certify, sample_point, SampleFamily, SamplingSummary};
pub use univariate::{linear, sturm_nonneg, Domain, RootInfo, SturmReport, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertifyError {
    #[error("the zero polynomial has no sign")]
    ZeroPolynomial,
    #[error("empty interval")]
    EmptyInterval,
    #[error("identity failed in step `{step}`: difference {difference}")]
    IdentityMismatch { step: String, difference: String },
    #[error("φ is negative at {point:?}: {value}")]
    Negative { point: [String; 4], value: String },
    #[error("φ vanishes at {point:?} outside both equality patterns")]
    UnclassifiedZero { point: [String; 4] },
}

/// Run every symbolic certificate in proof order.
pub fn symbolic_certificates() -> Result<Vec<Certificate>, CertifyError> {
    Ok(vec![
        discriminant_certify(Family::T11)?,
        discriminant_certify(Family::TT1)?,
        a1_zero_certify()?,
        critical_point_certify()?,
    ])
}
