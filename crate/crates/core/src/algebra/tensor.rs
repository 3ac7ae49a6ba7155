use std::ops::{Add, Mul, Neg, Sub};

use super::{AlgebraError, SYMMETRY_TOLERANCE};

const N4: usize = 256;
const N3: usize = 64;

#[inline]
fn idx4(i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * 4 + j) * 4 + k) * 4 + l
}

#[inline]
fn idx3(j: usize, k: usize, l: usize) -> usize {
    (j * 4 + k) * 4 + l
}

/// Which symmetries a [`FourTensor`] is required to carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymmetryClass {
    /// Antisymmetric in each pair, symmetric under pair exchange, first Bianchi.
    CurvatureLike,
    /// Antisymmetric in `(i, j)` and in `(k, l)` only.
    PairAntisymmetric,
}

/// A (0,4)-tensor in an orthonormal frame, stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct FourTensor {
    c: Box<[f64; N4]>,
    class: SymmetryClass,
}

impl FourTensor {
    pub fn zero(class: SymmetryClass) -> Self {
        Self { c: Box::new([0.0; N4]), class }
    }

    /// Builds a tensor from a component function and checks that the result
    /// carries the symmetries of `class`.
    pub fn from_fn<F>(class: SymmetryClass, f: F) -> Result<Self, AlgebraError>
    where
        F: FnMut(usize, usize, usize, usize) -> f64,
    {
        let t = Self::from_fn_unchecked(class, f);
        t.validate()?;
        Ok(t)
    }

    pub(crate) fn from_fn_unchecked<F>(class: SymmetryClass, mut f: F) -> Self
    where
        F: FnMut(usize, usize, usize, usize) -> f64,
    {
        let mut c = Box::new([0.0; N4]);
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        c[idx4(i, j, k, l)] = f(i, j, k, l);
                    }
                }
            }
        }
        Self { c, class }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.c[idx4(i, j, k, l)]
    }

    pub fn symmetry_class(&self) -> SymmetryClass {
        self.class
    }

    pub(crate) fn with_class(mut self, class: SymmetryClass) -> Self {
        self.class = class;
        self
    }

    pub fn components(&self) -> &[f64; N4] {
        &self.c
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.c.iter().zip(other.c.iter()).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Largest violation of pair antisymmetry.
    pub fn antisymmetry_defect(&self) -> f64 {
        let mut d = 0.0_f64;
        for_each4(|i, j, k, l| {
            let t = self.get(i, j, k, l);
            d = d.max((t + self.get(j, i, k, l)).abs());
            d = d.max((t + self.get(i, j, l, k)).abs());
        });
        d
    }

    /// Largest violation of `T_ijkl = T_klij`.
    pub fn pair_symmetry_defect(&self) -> f64 {
        let mut d = 0.0_f64;
        for_each4(|i, j, k, l| d = d.max((self.get(i, j, k, l) - self.get(k, l, i, j)).abs()));
        d
    }

    /// Largest violation of `T_ijkl + T_iklj + T_iljk = 0`.
    pub fn bianchi_defect(&self) -> f64 {
        let mut d = 0.0_f64;
        for_each4(|i, j, k, l| {
            let s = self.get(i, j, k, l) + self.get(i, k, l, j) + self.get(i, l, j, k);
            d = d.max(s.abs());
        });
        d
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let tol = SYMMETRY_TOLERANCE * self.max_abs().max(1.0);
        let checks: &[(&'static str, f64)] = &[("pair antisymmetry", self.antisymmetry_defect())];
        for &(property, defect) in checks {
            if defect > tol {
                return Err(AlgebraError::Symmetry { property, defect });
            }
        }
        if self.class == SymmetryClass::CurvatureLike {
            let pair = self.pair_symmetry_defect();
            if pair > tol {
                return Err(AlgebraError::Symmetry { property: "pair symmetry", defect: pair });
            }
            let bianchi = self.bianchi_defect();
            if bianchi > tol {
                return Err(AlgebraError::Symmetry { property: "first Bianchi identity", defect: bianchi });
            }
        }
        Ok(())
    }

    /// Components in the rotated frame `e'_a = Σ_b q[(b, a)] e_b`.
    pub fn rotated(&self, q: &nalgebra::Matrix4<f64>) -> Self {
        // contract one slot at a time
        let mut cur = self.c.clone();
        for slot in 0..4 {
            let mut next = Box::new([0.0; N4]);
            for_each4(|i, j, k, l| {
                let mut ix = [i, j, k, l];
                let a = ix[slot];
                let mut s = 0.0;
                for b in 0..4 {
                    ix[slot] = b;
                    s += q[(b, a)] * cur[idx4(ix[0], ix[1], ix[2], ix[3])];
                }
                next[idx4(i, j, k, l)] = s;
            });
            cur = next;
        }
        Self { c: cur, class: self.class }
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut c = self.c.clone();
        c.iter_mut().for_each(|x| *x *= s);
        Self { c, class: self.class }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut c = self.c.clone();
        for (x, y) in c.iter_mut().zip(other.c.iter()) {
            *x = f(*x, *y);
        }
        let class = if self.class == other.class { self.class } else { SymmetryClass::PairAntisymmetric };
        Self { c, class }
    }
}

pub(crate) fn for_each4(mut f: impl FnMut(usize, usize, usize, usize)) {
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    f(i, j, k, l);
                }
            }
        }
    }
}

impl Add for &FourTensor {
    type Output = FourTensor;
    fn add(self, rhs: &FourTensor) -> FourTensor {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &FourTensor {
    type Output = FourTensor;
    fn sub(self, rhs: &FourTensor) -> FourTensor {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for &FourTensor {
    type Output = FourTensor;
    fn mul(self, s: f64) -> FourTensor {
        self.scaled(s)
    }
}

impl Neg for &FourTensor {
    type Output = FourTensor;
    fn neg(self) -> FourTensor {
        self.scaled(-1.0)
    }
}

/// `⟨S, T⟩ = ¼ S_ijkl T_ijkl`, the normalization under which the half Weyl
/// norm equals the Frobenius norm of its operator on two-forms.
pub fn inner4(s: &FourTensor, t: &FourTensor) -> f64 {
    0.25 * s.c.iter().zip(t.c.iter()).map(|(a, b)| a * b).sum::<f64>()
}

/// Nearest curvature-like tensor: averages over the antisymmetry and pair
/// symmetries, then removes the totally antisymmetric (Bianchi) part.
pub fn curvature_projection(t: &FourTensor) -> FourTensor {
    let sym = FourTensor::from_fn_unchecked(SymmetryClass::PairAntisymmetric, |i, j, k, l| {
        let g = |a, b, c, d| t.get(a, b, c, d);
        0.125
            * (g(i, j, k, l) - g(j, i, k, l) - g(i, j, l, k) + g(j, i, l, k) + g(k, l, i, j)
                - g(l, k, i, j)
                - g(k, l, j, i)
                + g(l, k, j, i))
    });
    FourTensor::from_fn_unchecked(SymmetryClass::CurvatureLike, |i, j, k, l| {
        let g = |a, b, c, d| sym.get(a, b, c, d);
        g(i, j, k, l) - (g(i, j, k, l) + g(i, k, l, j) + g(i, l, j, k)) / 3.0
    })
}

/// A (0,3)-tensor antisymmetric in its last two slots: the home of
/// divergences `∇^i T_ijkl`, interior products and the D-tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeTensor {
    c: [f64; N3],
}

impl Default for ThreeTensor {
    fn default() -> Self {
        Self::zero()
    }
}

impl ThreeTensor {
    pub fn zero() -> Self {
        Self { c: [0.0; N3] }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut c = [0.0; N3];
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    c[idx3(j, k, l)] = f(j, k, l);
                }
            }
        }
        Self { c }
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize, l: usize) -> f64 {
        self.c[idx3(j, k, l)]
    }

    pub fn components(&self) -> &[f64; N3] {
        &self.c
    }

    /// Largest violation of `T_jkl = -T_jlk`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let mut d = 0.0_f64;
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    d = d.max((self.get(j, k, l) + self.get(j, l, k)).abs());
                }
            }
        }
        d
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.c.iter().zip(other.c.iter()).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

impl Add for &ThreeTensor {
    type Output = ThreeTensor;
    fn add(self, rhs: &ThreeTensor) -> ThreeTensor {
        ThreeTensor::from_fn(|j, k, l| self.get(j, k, l) + rhs.get(j, k, l))
    }
}

impl Sub for &ThreeTensor {
    type Output = ThreeTensor;
    fn sub(self, rhs: &ThreeTensor) -> ThreeTensor {
        ThreeTensor::from_fn(|j, k, l| self.get(j, k, l) - rhs.get(j, k, l))
    }
}

/// Full contraction `Σ S_jkl T_jkl` (no ¼ factor for three-tensors).
pub fn inner3(s: &ThreeTensor, t: &ThreeTensor) -> f64 {
    s.c.iter().zip(t.c.iter()).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_antisymmetric_components() {
        let err =
            FourTensor::from_fn(
                SymmetryClass::PairAntisymmetric,
                |i, j, k, l| {
                    if (i, j, k, l) == (0, 1, 0, 1) {
                        1.0
                    } else {
                        0.0
                    }
                },
            )
            .unwrap_err();
        assert!(matches!(err, AlgebraError::Symmetry { property: "pair antisymmetry", .. }));
    }

    #[test]
    fn rejects_bianchi_violation() {
        // antisymmetric and pair symmetric, but T_0123 alone breaks Bianchi
        let t = |i: usize, j: usize, k: usize, l: usize| -> f64 {
            let s = |a: usize, b: usize| if a < b { 1.0 } else { -1.0 };
            let p = [(0, 1), (2, 3)];
            let (x, y) = ((i.min(j), i.max(j)), (k.min(l), k.max(l)));
            if i == j || k == l {
                return 0.0;
            }
            if (x == p[0] && y == p[1]) || (x == p[1] && y == p[0]) {
                s(i, j) * s(k, l)
            } else {
                0.0
            }
        };
        assert!(FourTensor::from_fn(SymmetryClass::PairAntisymmetric, t).is_ok());
        let err = FourTensor::from_fn(SymmetryClass::CurvatureLike, t).unwrap_err();
        assert!(matches!(err, AlgebraError::Symmetry { property: "first Bianchi identity", .. }));
    }

    #[test]
    fn inner_products_with_zero() {
        let t = FourTensor::from_fn_unchecked(SymmetryClass::PairAntisymmetric, |i, j, k, l| {
            (i as f64 - j as f64) * (k as f64 - l as f64)
        });
        assert_eq!(inner4(&t, &FourTensor::zero(SymmetryClass::PairAntisymmetric)), 0.0);
        let v = ThreeTensor::from_fn(|j, k, l| j as f64 * (k as f64 - l as f64));
        assert_eq!(inner3(&v, &ThreeTensor::zero()), 0.0);
        assert!(inner3(&v, &v) > 0.0);
    }
}
