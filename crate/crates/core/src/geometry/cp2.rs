use crate::algebra::{CurvaturePoint, FourTensor, Orientation, SymmetryClass};

/// Curvature of a complex space form of holomorphic sectional curvature `c`
/// in a unitary frame with `J e_0 = e_1`, `J e_2 = e_3`:
/// `R_ijkl = (c/4)(δ_ik δ_jl − δ_il δ_jk + J_ik J_jl − J_il J_jk + 2 J_ij J_kl)`.
pub fn complex_space_form(c: f64) -> CurvaturePoint {
    let j = |a: usize, b: usize| match (a, b) {
        (0, 1) | (2, 3) => 1.0,
        (1, 0) | (3, 2) => -1.0,
        _ => 0.0,
    };
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let r = FourTensor::from_fn_unchecked(SymmetryClass::CurvatureLike, |a, b, k, l| {
        0.25 * c
            * (d(a, k) * d(b, l) - d(a, l) * d(b, k) + j(a, k) * j(b, l) - j(a, l) * j(b, k) + 2.0 * j(a, b) * j(k, l))
    });
    CurvaturePoint::new(r, Orientation::Positive).expect("space form curvature has curvature symmetries")
}
