use nalgebra::{Matrix3, SymmetricEigen};

use super::decomposition::{decompose, kn_product, CurvaturePoint, Orientation};
use super::duality::{hodge_dual_pair, project_half, Chirality, LAMBDA2_BASIS};
use super::tensor::{inner4, FourTensor, SymmetryClass, ThreeTensor};
use super::{AlgebraError, SYMMETRY_TOLERANCE};
use crate::{Sym2, Vector4};

/// Self-dual or anti-self-dual part of a Weyl tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfWeyl {
    chirality: Chirality,
    tensor: FourTensor,
    b: Option<[f64; 3]>,
}

impl HalfWeyl {
    /// Checks `W±_ijkl = ±W±_ijk'l' = ±W±_i'j'kl`, curvature symmetries and
    /// trace-freeness before accepting `tensor`.
    pub fn new(chirality: Chirality, tensor: FourTensor) -> Result<Self, AlgebraError> {
        let tensor = FourTensor::from_fn(SymmetryClass::CurvatureLike, |i, j, k, l| tensor.get(i, j, k, l))?;
        let tol = SYMMETRY_TOLERANCE * tensor.max_abs().max(1.0);
        let chiral = chirality_defect(&tensor, chirality);
        if chiral > tol {
            return Err(AlgebraError::Symmetry { property: "half Weyl chirality", defect: chiral });
        }
        let trace = (0..4)
            .flat_map(|i| (0..4).map(move |k| (i, k)))
            .map(|(i, k)| (0..4).map(|j| tensor.get(i, j, k, j)).sum::<f64>().abs())
            .fold(0.0, f64::max);
        if trace > tol {
            return Err(AlgebraError::Symmetry { property: "trace-freeness", defect: trace });
        }
        Ok(Self { chirality, tensor, b: None })
    }

    /// Half Weyl curvature of `cp`. For a negatively oriented frame the
    /// requested half is taken relative to the reversed orientation.
    pub fn of(cp: &CurvaturePoint, chirality: Chirality) -> Self {
        let frame_half = match cp.orientation() {
            Orientation::Positive => chirality,
            Orientation::Negative => chirality.opposite(),
        };
        let tensor = project_half(&decompose(cp).weyl, frame_half).with_class(SymmetryClass::CurvatureLike);
        Self { chirality, tensor, b: None }
    }

    /// Attaches `b_a = W±(e_0, e_{a+1}, e_0, e_{a+1})`, meaningful when the
    /// current frame diagonalizes the operator.
    pub fn with_eigenframe_b(mut self) -> Self {
        self.b = Some([self.tensor.get(0, 1, 0, 1), self.tensor.get(0, 2, 0, 2), self.tensor.get(0, 3, 0, 3)]);
        self
    }

    pub fn chirality(&self) -> Chirality {
        self.chirality
    }

    pub fn tensor(&self) -> &FourTensor {
        &self.tensor
    }

    pub fn b(&self) -> Option<[f64; 3]> {
        self.b
    }
}

/// Largest violation of `T_ijkl = ±T_ijk'l'` and `T_ijkl = ±T_i'j'kl`.
pub(crate) fn chirality_defect(t: &FourTensor, chirality: Chirality) -> f64 {
    let s = chirality.sign();
    let mut d = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    if i == j || k == l {
                        continue;
                    }
                    let (ip, jp) = hodge_dual_pair(i, j);
                    let (kp, lp) = hodge_dual_pair(k, l);
                    let v = t.get(i, j, k, l);
                    d = d.max((v - s * t.get(i, j, kp, lp)).abs());
                    d = d.max((v - s * t.get(ip, jp, k, l)).abs());
                    d = d.max((v - t.get(ip, jp, kp, lp)).abs());
                }
            }
        }
    }
    d
}

/// Matrix of `w` acting on `Λ±` in the orthonormal basis
/// `(E_a ± E_{a+3})/√2` built from [`LAMBDA2_BASIS`].
pub fn half_weyl_operator(w: &HalfWeyl) -> Matrix3<f64> {
    let s = w.chirality.sign();
    let t = &w.tensor;
    let entry = |p: usize, q: usize| {
        let (i, j) = LAMBDA2_BASIS[p];
        let (k, l) = LAMBDA2_BASIS[q];
        t.get(i, j, k, l)
    };
    Matrix3::from_fn(|a, b| 0.5 * (entry(a, b) + s * entry(a, b + 3) + s * entry(a + 3, b) + entry(a + 3, b + 3)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfWeylInvariants {
    /// `⟨W±, W±⟩`, equal to the operator Frobenius norm squared.
    pub norm_sq: f64,
    /// Determinant of the operator on `Λ±`.
    pub det: f64,
    /// Operator eigenvalues in decreasing order.
    pub eigenvalues: [f64; 3],
}

pub fn half_weyl_invariants(w: &HalfWeyl) -> HalfWeylInvariants {
    let op = half_weyl_operator(w);
    let eig = SymmetricEigen::new(op).eigenvalues;
    let mut ev = [eig[0], eig[1], eig[2]];
    ev.sort_by(|a, b| b.total_cmp(a));
    HalfWeylInvariants { norm_sq: inner4(&w.tensor, &w.tensor), det: op.determinant(), eigenvalues: ev }
}

/// `(ι_v T)_jkl = v^i T_ijkl`.
pub fn interior_product(t: &FourTensor, v: &Vector4) -> ThreeTensor {
    ThreeTensor::from_fn(|j, k, l| (0..4).map(|i| v[i] * t.get(i, j, k, l)).sum())
}

/// `⟨(R̊c∘R̊c)±, W±⟩` computed on tensors.
pub fn pair_ric_weyl(traceless_ricci: &Sym2, w: &HalfWeyl) -> f64 {
    let kk = kn_product(traceless_ricci, traceless_ricci);
    inner4(&project_half(&kk, w.chirality), &w.tensor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{assemble_curvature, metric};
    use nalgebra::Matrix4;

    fn s2r2() -> CurvaturePoint {
        // S² (curvature 1) on e2,e3; flat directions e0,e1
        let r = FourTensor::from_fn_unchecked(SymmetryClass::CurvatureLike, |i, j, k, l| {
            let on = |a: usize| a >= 2;
            if !(on(i) && on(j) && on(k) && on(l)) {
                return 0.0;
            }
            let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
            d(i, k) * d(j, l) - d(i, l) * d(j, k)
        });
        CurvaturePoint::new(r, Orientation::Positive).unwrap()
    }

    #[test]
    fn product_sphere_plane_anchor_values() {
        let cp = s2r2();
        assert_eq!(cp.scalar(), 2.0);
        for c in Chirality::BOTH {
            let w = HalfWeyl::of(&cp, c).with_eigenframe_b();
            let inv = half_weyl_invariants(&w);
            assert!((inv.norm_sq - 1.0 / 6.0).abs() < 1e-15);
            assert!((inv.norm_sq / 4.0 - 1.0 / 24.0).abs() < 1e-15);
            assert!((inv.det - 1.0 / 108.0).abs() < 1e-15);
            let want = [1.0 / 3.0, -1.0 / 6.0, -1.0 / 6.0];
            for (e, w) in inv.eigenvalues.iter().zip(want) {
                assert!((e - w).abs() < 1e-14);
            }
            let b = w.b().unwrap();
            for (x, y) in b.iter().zip([1.0 / 6.0, -1.0 / 12.0, -1.0 / 12.0]) {
                assert!((x - y).abs() < 1e-15);
            }
            let ric0 = cp.traceless_ricci();
            assert!((pair_ric_weyl(&ric0, &w) - 1.0 / 3.0).abs() < 1e-15);
            let iv = interior_product(w.tensor(), &Vector4::new(1.0, 0.0, 0.0, 0.0));
            assert!((crate::algebra::inner3(&iv, &iv) - 1.0 / 6.0).abs() < 1e-15);
        }
        let wp = HalfWeyl::of(&cp, Chirality::SelfDual);
        let wm = HalfWeyl::of(&cp, Chirality::AntiSelfDual);
        assert!(inner4(wp.tensor(), wm.tensor()).abs() < 1e-16);
    }

    #[test]
    fn assembly_matches_product_model() {
        let ric0 = Sym2::from_diagonal(&Vector4::new(-0.5, -0.5, 0.5, 0.5));
        let b = [1.0 / 6.0, -1.0 / 12.0, -1.0 / 12.0];
        let cp = assemble_curvature(2.0, &ric0, b, b, &Matrix4::identity()).unwrap();
        assert!(cp.riemann().max_abs_diff(s2r2().riemann()) < 1e-12);
    }

    #[test]
    fn zero_half_weyl_invariants() {
        let cp = CurvaturePoint::from_ricci(&(metric() * 3.0));
        let w = HalfWeyl::of(&cp, Chirality::SelfDual);
        let inv = half_weyl_invariants(&w);
        assert_eq!(inv.norm_sq, 0.0);
        assert_eq!(inv.det, 0.0);
        assert_eq!(inv.eigenvalues, [0.0; 3]);
        assert_eq!(pair_ric_weyl(&Sym2::zeros(), &w), 0.0);
        assert_eq!(interior_product(w.tensor(), &Vector4::zeros()).max_abs(), 0.0);
    }

    #[test]
    fn new_rejects_wrong_chirality() {
        let w = HalfWeyl::of(&s2r2(), Chirality::SelfDual);
        assert!(HalfWeyl::new(Chirality::SelfDual, w.tensor().clone()).is_ok());
        let err = HalfWeyl::new(Chirality::AntiSelfDual, w.tensor().clone()).unwrap_err();
        assert!(matches!(err, AlgebraError::Symmetry { property: "half Weyl chirality", .. }));
    }
}
