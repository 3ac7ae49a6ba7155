use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use super::tensor::{FourTensor, SymmetryClass};
use super::{AlgebraError, TRACE_TOLERANCE};
use crate::Sym2;

/// Sign of the frame volume form relative to the reference orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Positive,
    Negative,
}

/// Identity metric of an orthonormal frame.
pub fn metric() -> Sym2 {
    Sym2::identity()
}

/// All curvature of a metric at one point, in an orthonormal frame.
///
/// The trace convention is `R_ik = Σ_j R_ijkj`, so `R_ijij` is the sectional
/// curvature of the plane `e_i ∧ e_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvaturePoint {
    riemann: FourTensor,
    ricci: Sym2,
    scalar: f64,
    orientation: Orientation,
}

impl CurvaturePoint {
    /// Validates the curvature symmetries and derives Ricci and scalar curvature.
    pub fn new(riemann: FourTensor, orientation: Orientation) -> Result<Self, AlgebraError> {
        let riemann = FourTensor::from_fn(SymmetryClass::CurvatureLike, |i, j, k, l| riemann.get(i, j, k, l))?;
        Ok(Self::from_riemann_unchecked(riemann, orientation))
    }

    pub(crate) fn from_riemann_unchecked(riemann: FourTensor, orientation: Orientation) -> Self {
        let riemann = riemann.with_class(SymmetryClass::CurvatureLike);
        let ricci = Sym2::from_fn(|i, k| (0..4).map(|j| riemann.get(i, j, k, j)).sum());
        let scalar = ricci.trace();
        Self { riemann, ricci, scalar, orientation }
    }

    /// Curvature with vanishing Weyl tensor and the given Ricci tensor.
    pub fn from_ricci(ricci: &Sym2) -> Self {
        let ricci = ricci.symmetric_part();
        let g = metric();
        let scalar = ricci.trace();
        let rk = kn_product(&ricci, &g);
        let gg = kn_product(&g, &g);
        let riemann = FourTensor::from_fn_unchecked(SymmetryClass::CurvatureLike, |i, j, k, l| {
            0.5 * rk.get(i, j, k, l) - scalar / 12.0 * gg.get(i, j, k, l)
        });
        Self { riemann, ricci, scalar, orientation: Orientation::Positive }
    }

    pub fn flat() -> Self {
        Self::from_ricci(&Sym2::zeros())
    }

    pub fn riemann(&self) -> &FourTensor {
        &self.riemann
    }

    pub fn ricci(&self) -> &Sym2 {
        &self.ricci
    }

    pub fn scalar(&self) -> f64 {
        self.scalar
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Traceless Ricci tensor `Ric − (R/4) g`.
    pub fn traceless_ricci(&self) -> Sym2 {
        self.ricci - metric() * (self.scalar / 4.0)
    }

    /// The same curvature expressed in the frame `e'_a = Σ_b q[(b, a)] e_b`.
    /// An orientation-reversing `q` flips the recorded orientation.
    pub fn reframed(&self, q: &Matrix4<f64>) -> Self {
        let riemann = self.riemann.rotated(q);
        let orientation = match (q.determinant() < 0.0, self.orientation) {
            (false, o) => o,
            (true, Orientation::Positive) => Orientation::Negative,
            (true, Orientation::Negative) => Orientation::Positive,
        };
        Self::from_riemann_unchecked(riemann, orientation)
    }
}

/// Kulkarni–Nomizu product
/// `(A∘B)_ijkl = A_ik B_jl + A_jl B_ik − A_il B_jk − A_jk B_il`.
pub fn kn_product(a: &Sym2, b: &Sym2) -> FourTensor {
    FourTensor::from_fn_unchecked(SymmetryClass::CurvatureLike, |i, j, k, l| {
        a[(i, k)] * b[(j, l)] + a[(j, l)] * b[(i, k)] - a[(i, l)] * b[(j, k)] - a[(j, k)] * b[(i, l)]
    })
}

/// Output of the orthogonal decomposition `Rm = W + ½ Ric∘g − (R/12) g∘g`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub weyl: FourTensor,
    pub traceless_ricci: Sym2,
    pub scalar: f64,
}

pub fn decompose(cp: &CurvaturePoint) -> Decomposition {
    let g = metric();
    let rk = kn_product(cp.ricci(), &g);
    let gg = kn_product(&g, &g);
    let r = cp.scalar();
    let weyl = FourTensor::from_fn_unchecked(SymmetryClass::CurvatureLike, |i, j, k, l| {
        cp.riemann().get(i, j, k, l) - 0.5 * rk.get(i, j, k, l) + r / 12.0 * gg.get(i, j, k, l)
    });
    Decomposition { weyl, traceless_ricci: cp.traceless_ricci(), scalar: r }
}

// (basis index, sign) of e_i ∧ e_j in LAMBDA2_BASIS
fn pair_index(i: usize, j: usize) -> Option<(usize, f64)> {
    super::duality::LAMBDA2_BASIS.iter().enumerate().find_map(|(p, &(a, b))| {
        if (a, b) == (i, j) {
            Some((p, 1.0))
        } else if (a, b) == (j, i) {
            Some((p, -1.0))
        } else {
            None
        }
    })
}

/// Inverse of [`decompose`]: builds curvature from scalar curvature, the
/// traceless Ricci tensor and the half Weyl eigenvalue data.
///
/// `W±` are taken diagonal on `Λ±` of `frame` (columns are the frame vectors
/// in output coordinates) with operator eigenvalues `2 b_a` on
/// `(e_0∧e_a' ± ⋆(e_0∧e_a'))/√2`.
pub fn assemble_curvature(
    scalar: f64,
    traceless_ricci: &Sym2,
    wplus_b: [f64; 3],
    wminus_b: [f64; 3],
    frame: &Matrix4<f64>,
) -> Result<CurvaturePoint, AlgebraError> {
    for b in [wplus_b, wminus_b] {
        let s: f64 = b.iter().sum();
        if s.abs() > TRACE_TOLERANCE {
            return Err(AlgebraError::NonzeroTrace(s));
        }
    }
    let orth = (frame.transpose() * frame - Matrix4::identity()).abs().max();
    if orth > 1e-12 || frame.determinant() <= 0.0 {
        return Err(AlgebraError::BadFrame(orth));
    }

    let mut op = [[0.0; 6]; 6];
    for a in 0..3 {
        let (p, m) = (wplus_b[a], wminus_b[a]);
        op[a][a] = p + m;
        op[a + 3][a + 3] = p + m;
        op[a][a + 3] = p - m;
        op[a + 3][a] = p - m;
    }
    let weyl_eigen = FourTensor::from_fn_unchecked(SymmetryClass::CurvatureLike, |i, j, k, l| {
        match (pair_index(i, j), pair_index(k, l)) {
            (Some((p, s)), Some((q, t))) => s * t * op[p][q],
            _ => 0.0,
        }
    });
    let weyl = weyl_eigen.rotated(&frame.transpose());

    let g = metric();
    let ricci = traceless_ricci.symmetric_part() + g * (scalar / 4.0);
    let rk = kn_product(&ricci, &g);
    let gg = kn_product(&g, &g);
    let riemann = FourTensor::from_fn_unchecked(SymmetryClass::CurvatureLike, |i, j, k, l| {
        weyl.get(i, j, k, l) + 0.5 * rk.get(i, j, k, l) - scalar / 12.0 * gg.get(i, j, k, l)
    });
    Ok(CurvaturePoint::from_riemann_unchecked(riemann, Orientation::Positive))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kn_of_metric_with_itself() {
        let gg = kn_product(&metric(), &metric());
        assert_eq!(gg.get(0, 1, 0, 1), 2.0);
        assert_eq!(gg.get(0, 1, 1, 0), -2.0);
        assert_eq!(gg.get(0, 1, 2, 3), 0.0);
    }

    #[test]
    fn kn_of_traceless_diagonal() {
        let a = [0.7, -0.2, 0.4, -0.9];
        let m = Sym2::from_diagonal(&crate::Vector4::from(a));
        let p = kn_product(&m, &m);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!((p.get(i, j, i, j) - 2.0 * a[i] * a[j]).abs() < 1e-15);
                }
            }
        }
        assert_eq!(kn_product(&Sym2::zeros(), &m).max_abs(), 0.0);
    }

    #[test]
    fn round_sphere_decomposes_to_pure_scalar() {
        let gg = kn_product(&metric(), &metric());
        let cp = CurvaturePoint::new(gg.scaled(0.5), Orientation::Positive).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(cp.riemann().get(i, j, i, j), 1.0);
                }
            }
        }
        let d = decompose(&cp);
        assert_eq!(d.scalar, 12.0);
        assert!(d.weyl.max_abs() < 1e-15);
        assert!(d.traceless_ricci.abs().max() < 1e-15);
    }

    #[test]
    fn flat_assembly() {
        let cp = assemble_curvature(0.0, &Sym2::zeros(), [0.0; 3], [0.0; 3], &Matrix4::identity()).unwrap();
        assert_eq!(cp.riemann().max_abs(), 0.0);
        assert_eq!(cp.scalar(), 0.0);
    }

    #[test]
    fn assembly_rejects_traceful_b() {
        let err = assemble_curvature(1.0, &Sym2::zeros(), [0.1, 0.0, 0.0], [0.0; 3], &Matrix4::identity());
        assert!(matches!(err, Err(AlgebraError::NonzeroTrace(_))));
        let mut reflect = Matrix4::identity();
        reflect[(3, 3)] = -1.0;
        let err = assemble_curvature(1.0, &Sym2::zeros(), [0.0; 3], [0.0; 3], &reflect);
        assert!(matches!(err, Err(AlgebraError::BadFrame(_))));
    }
}
