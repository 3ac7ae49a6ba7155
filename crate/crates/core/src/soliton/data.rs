use nalgebra::Matrix4;

use crate::algebra::{
    kn_product, metric, project_half3, Chirality, CurvaturePoint, FourTensor, SymmetryClass, ThreeTensor,
};
use crate::{Sym2, Vector4};

/// Covariant derivative of the curvature tensor in an orthonormal frame,
/// `component(m)_ijkl = ∇_m R_ijkl`.
#[derive(Clone, Debug, PartialEq)]
pub struct NablaRm {
    comps: [FourTensor; 4],
}

impl NablaRm {
    pub fn new(comps: [FourTensor; 4]) -> Self {
        Self { comps }
    }

    pub fn zero() -> Self {
        Self { comps: std::array::from_fn(|_| FourTensor::zero(SymmetryClass::CurvatureLike)) }
    }

    pub fn component(&self, m: usize) -> &FourTensor {
        &self.comps[m]
    }

    /// `∇_m R_ik = Σ_j ∇_m R_ijkj`.
    pub fn ricci(&self) -> [Sym2; 4] {
        std::array::from_fn(|m| Sym2::from_fn(|i, k| (0..4).map(|j| self.comps[m].get(i, j, k, j)).sum()))
    }

    pub fn scalar_gradient(&self) -> Vector4 {
        let ric = self.ricci();
        Vector4::from_fn(|m, _| ric[m].trace())
    }

    /// `∇_m W = ∇_m Rm − ½ ∇_m Ric∘g + (∇_m R / 12) g∘g`.
    pub fn weyl(&self) -> [FourTensor; 4] {
        let g = metric();
        let gg = kn_product(&g, &g);
        let ric = self.ricci();
        std::array::from_fn(|m| {
            let rk = kn_product(&ric[m], &g);
            let dr = ric[m].trace();
            let c = &self.comps[m];
            FourTensor::from_fn_unchecked(SymmetryClass::CurvatureLike, |i, j, k, l| {
                c.get(i, j, k, l) - 0.5 * rk.get(i, j, k, l) + dr / 12.0 * gg.get(i, j, k, l)
            })
        })
    }

    /// `(δRm)_jkl = Σ_i ∇_i R_ijkl`.
    pub fn divergence(&self) -> ThreeTensor {
        divergence(&self.comps)
    }

    /// `(δW)_jkl = Σ_i ∇_i W_ijkl`.
    pub fn weyl_divergence(&self) -> ThreeTensor {
        divergence(&self.weyl())
    }

    /// `δW± = ½(δW_jkl ± δW_jk'l')`.
    pub fn half_weyl_divergence(&self, chirality: Chirality) -> ThreeTensor {
        project_half3(&self.weyl_divergence(), chirality)
    }

    /// Components in the frame `e'_a = Σ_b q[(b, a)] e_b`.
    pub fn rotated(&self, q: &Matrix4<f64>) -> Self {
        let r: [FourTensor; 4] = std::array::from_fn(|m| self.comps[m].rotated(q));
        Self {
            comps: std::array::from_fn(|a| {
                let mut acc = FourTensor::zero(SymmetryClass::CurvatureLike);
                for (b, t) in r.iter().enumerate() {
                    acc = &acc + &t.scaled(q[(b, a)]);
                }
                acc
            }),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().map(FourTensor::max_abs).fold(0.0, f64::max)
    }
}

fn divergence(t: &[FourTensor; 4]) -> ThreeTensor {
    ThreeTensor::from_fn(|j, k, l| (0..4).map(|i| t[i].get(i, j, k, l)).sum())
}

/// Curvature and potential data of a gradient soliton at one point, all in
/// the orthonormal frame of `cp`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolitonPointData {
    pub cp: CurvaturePoint,
    pub grad_f: Vector4,
    pub hess_f: Sym2,
    pub grad_r: Vector4,
    pub nabla_rm: Option<NablaRm>,
    pub lambda: f64,
    pub del_w_plus: Option<ThreeTensor>,
    pub del_w_minus: Option<ThreeTensor>,
}

impl SolitonPointData {
    /// Data determined by the soliton equation alone: `∇²f = λg − Ric` and
    /// `∇R = 2 Ric(∇f)`. No curvature derivatives are attached.
    pub fn algebraic(cp: CurvaturePoint, grad_f: Vector4, lambda: f64) -> Self {
        let hess_f = metric() * lambda - cp.ricci();
        let grad_r = cp.ricci() * grad_f * 2.0;
        Self { cp, grad_f, hess_f, grad_r, nabla_rm: None, lambda, del_w_plus: None, del_w_minus: None }
    }

    /// Attaches `∇Rm` and derives `δW±` from it.
    pub fn with_nabla_rm(mut self, nabla: NablaRm) -> Self {
        self.del_w_plus = Some(nabla.half_weyl_divergence(Chirality::SelfDual));
        self.del_w_minus = Some(nabla.half_weyl_divergence(Chirality::AntiSelfDual));
        self.nabla_rm = Some(nabla);
        self
    }

    pub fn del_w(&self, chirality: Chirality) -> Option<&ThreeTensor> {
        match chirality {
            Chirality::SelfDual => self.del_w_plus.as_ref(),
            Chirality::AntiSelfDual => self.del_w_minus.as_ref(),
        }
    }

    /// Frobenius norm of `Ric + ∇²f − λg`.
    pub fn soliton_residual(&self) -> f64 {
        (self.cp.ricci() + self.hess_f - metric() * self.lambda).norm()
    }

    /// Largest component of `∇R − 2 Ric(∇f)`.
    pub fn scalar_gradient_residual(&self) -> f64 {
        (self.grad_r - self.cp.ricci() * self.grad_f * 2.0).amax()
    }

    /// The same data in the frame `e'_a = Σ_b q[(b, a)] e_b`.
    pub fn reframed(&self, q: &Matrix4<f64>) -> Self {
        let cp = self.cp.reframed(q);
        let mut out = Self {
            cp,
            grad_f: q.transpose() * self.grad_f,
            hess_f: q.transpose() * self.hess_f * q,
            grad_r: q.transpose() * self.grad_r,
            nabla_rm: None,
            lambda: self.lambda,
            del_w_plus: None,
            del_w_minus: None,
        };
        if let Some(n) = &self.nabla_rm {
            out = out.with_nabla_rm(n.rotated(q));
        }
        out
    }
}
