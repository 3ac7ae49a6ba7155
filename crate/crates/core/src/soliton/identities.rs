use nalgebra::{Matrix3, Matrix4, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::data::SolitonPointData;
use super::SolitonError;
use crate::algebra::{
    decompose, half_weyl_invariants, hodge_dual_pair, inner3, metric, pair_ric_weyl, project_half, project_half3,
    Chirality, CurvaturePoint, EigenProfile, HalfWeyl, ThreeTensor,
};
use crate::geometry::{Point, GRADIENT_THRESHOLD};
use crate::Vector4;

/// Outcome of checking one identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_id: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Point>,
}

impl IdentityReport {
    /// `pass` is `residual ≤ tolerance`; a NaN residual fails.
    pub fn new(identity_id: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self { identity_id: identity_id.into(), residual, tolerance, pass: residual <= tolerance, point: None }
    }

    pub fn at(mut self, point: Point) -> Self {
        self.point = Some(point);
        self
    }
}

/// Which formula produces the D-tensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DPath {
    /// `D_jkl = 2∇^i W_ijkl − W_ijkl ∇^i f`, from `∇Rm`.
    Derivative,
    /// The expression in Ricci, `∇f` and `∇R` valid on solitons.
    Algebraic,
}

pub fn d_tensor(data: &SolitonPointData, path: DPath) -> Result<ThreeTensor, SolitonError> {
    let f = &data.grad_f;
    match path {
        DPath::Derivative => {
            let nabla = data.nabla_rm.as_ref().ok_or(SolitonError::MissingDerivatives("derivative D-tensor"))?;
            let div = nabla.weyl_divergence();
            let w = decompose(&data.cp).weyl;
            Ok(ThreeTensor::from_fn(|j, k, l| {
                2.0 * div.get(j, k, l) - (0..4).map(|i| w.get(i, j, k, l) * f[i]).sum::<f64>()
            }))
        }
        DPath::Algebraic => {
            let ric = data.cp.ricci();
            let r = data.cp.scalar();
            let dr = &data.grad_r;
            let g = metric();
            Ok(ThreeTensor::from_fn(|j, k, l| {
                0.5 * (ric[(j, l)] * f[k] - ric[(j, k)] * f[l]) + (dr[k] * g[(j, l)] - dr[l] * g[(j, k)]) / 12.0
                    - r / 6.0 * (g[(j, l)] * f[k] - g[(j, k)] * f[l])
            }))
        }
    }
}

/// `D±_jkl = ½(D_jkl ± D_jk'l')`.
pub fn d_half(data: &SolitonPointData, chirality: Chirality, path: DPath) -> Result<ThreeTensor, SolitonError> {
    Ok(project_half3(&d_tensor(data, path)?, chirality))
}

/// The four members of `|D⁺|² = |D⁻|² = ½|D|² = ¼|R̊c|²|∇f|² − (1/48)|R∇f − 2∇R|²`.
pub fn d_norm_terms(data: &SolitonPointData) -> [f64; 4] {
    let d = d_tensor(data, DPath::Algebraic).expect("algebraic path needs no derivatives");
    let plus = project_half3(&d, Chirality::SelfDual);
    let minus = project_half3(&d, Chirality::AntiSelfDual);
    let ric0 = data.cp.traceless_ricci();
    let v = data.grad_f * data.cp.scalar() - data.grad_r * 2.0;
    let rhs = 0.25 * ric0.norm_squared() * data.grad_f.norm_squared() - v.norm_squared() / 48.0;
    [inner3(&plus, &plus), inner3(&minus, &minus), 0.5 * inner3(&d, &d), rhs]
}

pub fn check_d_norm_chain(data: &SolitonPointData, tolerance: f64) -> IdentityReport {
    let q = d_norm_terms(data);
    let residual = (0..3).map(|i| (q[i] - q[3]).abs()).fold(0.0, f64::max);
    IdentityReport::new("dtensor.norm_chain", residual, tolerance)
}

/// Residual of `D_derivative = D_algebraic`.
pub fn check_d_two_path(data: &SolitonPointData, tolerance: f64) -> Result<IdentityReport, SolitonError> {
    let a = d_tensor(data, DPath::Derivative)?;
    let b = d_tensor(data, DPath::Algebraic)?;
    Ok(IdentityReport::new("dtensor.two_path", a.max_abs_diff(&b), tolerance))
}

/// The three soliton identities linking curvature derivatives to `∇f`:
/// `∇_k R_jl − ∇_l R_jk = R_ijkl ∇^i f`, `∇^i R_ijkl = R_ijkl ∇^i f`, and
/// `∇_i R = 2∇^j R_ij = 2R_ij ∇^j f`.
pub fn check_soliton_curvature(data: &SolitonPointData, tolerance: f64) -> Result<[IdentityReport; 3], SolitonError> {
    let nabla = data.nabla_rm.as_ref().ok_or(SolitonError::MissingDerivatives("soliton curvature identities"))?;
    let f = &data.grad_f;
    let rm = data.cp.riemann();
    let contracted = ThreeTensor::from_fn(|j, k, l| (0..4).map(|i| rm.get(i, j, k, l) * f[i]).sum());
    let dric = nabla.ricci();
    let curl = ThreeTensor::from_fn(|j, k, l| dric[k][(j, l)] - dric[l][(j, k)]);
    let div = nabla.divergence();

    let dr = nabla.scalar_gradient();
    let div_ric = Vector4::from_fn(|i, _| (0..4).map(|j| dric[j][(i, j)]).sum());
    let ric_f = data.cp.ricci() * f;
    let scalar = (dr - div_ric * 2.0).amax().max((dr - ric_f * 2.0).amax());
    Ok([
        IdentityReport::new("soliton.ricci_curl", curl.max_abs_diff(&contracted), tolerance),
        IdentityReport::new("soliton.rm_divergence", div.max_abs_diff(&contracted), tolerance),
        IdentityReport::new("soliton.scalar_gradient", scalar, tolerance),
    ])
}

/// `R_ijkl ∇^i f ± R_ijk'l' ∇^i f = 4∇^i W±_ijkl + (1/6)(∇_k R g_jl − ∇_l R g_jk)
/// ± (1/6)(∇_k' R g_jl' − ∇_l' R g_jk')`.
pub fn check_half_weyl_divergence(
    data: &SolitonPointData,
    chirality: Chirality,
    tolerance: f64,
) -> Result<IdentityReport, SolitonError> {
    let nabla = data.nabla_rm.as_ref().ok_or(SolitonError::MissingDerivatives("half Weyl divergence identity"))?;
    let s = chirality.sign();
    let f = &data.grad_f;
    let dr = &data.grad_r;
    let rm = data.cp.riemann();
    let g = metric();
    let div_half = nabla.half_weyl_divergence(chirality);
    let contract = |j: usize, k: usize, l: usize| (0..4).map(|i| rm.get(i, j, k, l) * f[i]).sum::<f64>();
    let grad_term = |j: usize, k: usize, l: usize| (dr[k] * g[(j, l)] - dr[l] * g[(j, k)]) / 6.0;
    let mut residual = 0.0_f64;
    for j in 0..4 {
        for k in 0..4 {
            for l in 0..4 {
                if k == l {
                    continue;
                }
                let (kp, lp) = hodge_dual_pair(k, l);
                let lhs = contract(j, k, l) + s * contract(j, kp, lp);
                let rhs = 4.0 * div_half.get(j, k, l) + grad_term(j, k, l) + s * grad_term(j, kp, lp);
                residual = residual.max((lhs - rhs).abs());
            }
        }
    }
    Ok(IdentityReport::new(format!("weyl.half_divergence_{}", chirality_tag(chirality)), residual, tolerance))
}

pub(crate) fn chirality_tag(c: Chirality) -> &'static str {
    match c {
        Chirality::SelfDual => "plus",
        Chirality::AntiSelfDual => "minus",
    }
}

/// Spectral data in a frame with `e_0 = ∇f/|∇f|` and `e_1, e_2, e_3` Ricci
/// eigenvectors (ascending), after checking the hypotheses and conclusions
/// that tie `b` to `a`.
pub fn eigen_profile(
    data: &SolitonPointData,
    chirality: Chirality,
    tolerance: f64,
) -> Result<EigenProfile, SolitonError> {
    let norm = data.grad_f.norm();
    if norm <= GRADIENT_THRESHOLD {
        return Err(SolitonError::EinsteinPoint(norm));
    }
    if let Some(dw) = data.del_w(chirality) {
        let defect = dw.max_abs();
        if defect > tolerance {
            return Err(SolitonError::Hypothesis { what: "half Weyl divergence vanishes", defect });
        }
    }
    let u = data.grad_f / norm;
    let ric = data.cp.ricci();
    let ru = ric * u;
    let parallel = (ru - u * u.dot(&ru)).amax();
    if parallel > tolerance {
        return Err(SolitonError::Hypothesis { what: "∇f is a Ricci eigenvector", defect: parallel });
    }

    let frame = adapted_frame(&u, ric);
    let cp = data.cp.reframed(&frame);
    let r = cp.scalar();
    let ric0 = cp.traceless_ricci();
    let a = [ric0[(0, 0)], ric0[(1, 1)], ric0[(2, 2)], ric0[(3, 3)]];
    let w = HalfWeyl::of(&cp, chirality).with_eigenframe_b();
    let b = w.b().expect("attached above");

    let t = w.tensor();
    let mut off = 0.0_f64;
    for j in 1..4 {
        for l in 1..4 {
            if j != l {
                off = off.max(t.get(0, j, 0, l).abs());
            }
        }
    }
    if off > tolerance {
        return Err(SolitonError::Hypothesis { what: "half Weyl diagonal in the Ricci eigenframe", defect: off });
    }
    let predicted = EigenProfile::predicted_b(&a);
    let formula = (0..3).map(|i| (b[i] - predicted[i]).abs()).fold(0.0, f64::max);
    if formula > tolerance {
        return Err(SolitonError::Hypothesis { what: "half Weyl eigenvalues determined by Ricci", defect: formula });
    }
    Ok(EigenProfile { a, b, scalar: r, grad_f_norm: norm })
}

/// Positively oriented orthonormal frame `(u, v_1, v_2, v_3)` with `v_i`
/// eigenvectors of `ric` restricted to `u^⊥`, eigenvalues ascending.
fn adapted_frame(u: &Vector4, ric: &Matrix4<f64>) -> Matrix4<f64> {
    // Householder reflection sending e_0 to u
    let e0 = Vector4::x();
    let w = if (u - e0).norm() < 1e-12 { Vector4::zeros() } else { (u - e0).normalize() };
    let h = Matrix4::identity() - w * w.transpose() * 2.0;
    let complement = h.fixed_columns::<3>(1).into_owned();
    let block: Matrix3<f64> = complement.transpose() * ric * complement;
    let eig = SymmetricEigen::new((block + block.transpose()) * 0.5);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let mut frame = Matrix4::zeros();
    frame.set_column(0, u);
    for (c, &i) in order.iter().enumerate() {
        frame.set_column(c + 1, &(complement * eig.eigenvectors.column(i)));
    }
    if frame.determinant() < 0.0 {
        frame.set_column(3, &(-frame.column(3)));
    }
    frame
}

/// Profile of an Einstein point (`∇f = 0`, or no soliton structure): `a` from
/// the traceless Ricci spectrum and `b` as half the operator eigenvalues, in
/// decreasing order.
pub fn einstein_profile(data: &SolitonPointData, chirality: Chirality) -> EigenProfile {
    let ric0 = data.cp.traceless_ricci();
    let mut a: Vec<f64> = ric0.symmetric_eigenvalues().iter().copied().collect();
    a.sort_by(f64::total_cmp);
    let inv = half_weyl_invariants(&HalfWeyl::of(&data.cp, chirality));
    EigenProfile {
        a: [a[0], a[1], a[2], a[3]],
        b: inv.eigenvalues.map(|e| e / 2.0),
        scalar: data.cp.scalar(),
        grad_f_norm: data.grad_f.norm(),
    }
}

/// Largest `|∇_m W±|` component, which bounds how far the data is from the
/// parallel regime.
pub fn half_weyl_gradient(data: &SolitonPointData, chirality: Chirality) -> Option<f64> {
    let nabla = data.nabla_rm.as_ref()?;
    Some(nabla.weyl().iter().map(|t| project_half(t, chirality).max_abs()).fold(0.0, f64::max))
}

/// How far curvature derivatives may be from zero for data to count as
/// having parallel half Weyl tensor.
pub const PARALLEL_TOLERANCE: f64 = 1e-6;

/// `4λ|W±|² − 36 det W± − ⟨(R̊c∘R̊c)±, W±⟩`, the zeroth-order part of the
/// Weitzenböck formula left once `∇W± = 0`.
pub fn weitzenbock_residual(
    data: &SolitonPointData,
    chirality: Chirality,
    parallel_half_weyl: bool,
    tolerance: f64,
) -> Result<IdentityReport, SolitonError> {
    if !parallel_half_weyl {
        return Err(SolitonError::Unsupported("Weitzenböck closure outside the parallel half Weyl regime"));
    }
    if let Some(grad) = half_weyl_gradient(data, chirality) {
        if grad > PARALLEL_TOLERANCE {
            return Err(SolitonError::Hypothesis { what: "half Weyl tensor is parallel", defect: grad });
        }
    }
    let residual = weitzenbock_terms(&data.cp, data.lambda, chirality).iter().sum::<f64>().abs();
    Ok(IdentityReport::new(format!("weitzenbock.parallel_{}", chirality_tag(chirality)), residual, tolerance))
}

/// `[4λ|W±|², −36 det W±, −⟨(R̊c∘R̊c)±, W±⟩]`.
pub fn weitzenbock_terms(cp: &CurvaturePoint, lambda: f64, chirality: Chirality) -> [f64; 3] {
    let w = HalfWeyl::of(cp, chirality);
    let inv = half_weyl_invariants(&w);
    [4.0 * lambda * inv.norm_sq, -36.0 * inv.det, -pair_ric_weyl(&cp.traceless_ricci(), &w)]
}

/// `|Δ_f R − 2λR + 2|Ric|²|`.
pub fn check_drift_laplacian(data: &SolitonPointData, laplacian_f_r: f64, tolerance: f64) -> IdentityReport {
    let r = data.cp.scalar();
    let residual = (laplacian_f_r - 2.0 * data.lambda * r + 2.0 * data.cp.ricci().norm_squared()).abs();
    IdentityReport::new("scalar.drift_laplacian", residual, tolerance)
}

/// `R²|W±|² − 36R det W± + 4|W±|²|R̊c|² − R⟨(R̊c∘R̊c)±, W±⟩` from profile data.
pub fn quartic_quantity(p: &EigenProfile) -> f64 {
    let w2 = p.weyl_norm_sq();
    let r = p.scalar;
    r * r * w2 - 36.0 * r * p.weyl_det() + 4.0 * w2 * p.traceless_ricci_norm_sq() - r * p.ricci_weyl_pairing()
}

/// The same quantity from tensors, with no eigenframe.
pub fn quartic_from_curvature(cp: &CurvaturePoint, chirality: Chirality) -> f64 {
    let w = HalfWeyl::of(cp, chirality);
    let inv = half_weyl_invariants(&w);
    let ric0 = cp.traceless_ricci();
    let r = cp.scalar();
    r * r * inv.norm_sq - 36.0 * r * inv.det + 4.0 * inv.norm_sq * ric0.norm_squared() - r * pair_ric_weyl(&ric0, &w)
}

/// `|W±|` at or below this (relative to `max(1, |R|)`) counts as zero.
pub const ZERO_WEYL: f64 = 1e-10;

/// Lower bound for `Δ_h(|W±|/R)`: the quantity above divided by `2|W±|R²`.
pub fn drift_inequality_rhs(p: &EigenProfile) -> Result<f64, SolitonError> {
    let w = p.weyl_norm_sq().sqrt();
    if w <= ZERO_WEYL * p.scalar.abs().max(1.0) {
        return Err(SolitonError::Domain("half Weyl tensor vanishes"));
    }
    if p.scalar <= 0.0 {
        return Err(SolitonError::Domain("scalar curvature is not positive"));
    }
    Ok(quartic_quantity(p) / (2.0 * w * p.scalar * p.scalar))
}

/// Largest change of `R`, `|W±|²`, `det W±` and the quartic quantity when
/// `cp` is re-expressed in the rotated frame `q` (`det q = 1`), each relative
/// to `max(1, |value|)`.
pub fn frame_covariance_defect(cp: &CurvaturePoint, q: &Matrix4<f64>) -> f64 {
    let moved = cp.reframed(q);
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(1.0);
    let mut d = rel(cp.scalar(), moved.scalar());
    for c in Chirality::BOTH {
        let (a, b) = (half_weyl_invariants(&HalfWeyl::of(cp, c)), half_weyl_invariants(&HalfWeyl::of(&moved, c)));
        d = d.max(rel(a.norm_sq, b.norm_sq)).max(rel(a.det, b.det));
        d = d.max(rel(quartic_from_curvature(cp, c), quartic_from_curvature(&moved, c)));
    }
    d
}
