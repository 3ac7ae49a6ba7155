use serde::{Deserialize, Serialize};

use super::tensor::{FourTensor, SymmetryClass, ThreeTensor};
use super::AlgebraError;

/// Self-dual (`+`) or anti-self-dual (`−`) half of `Λ²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Chirality {
    #[serde(rename = "+")]
    SelfDual,
    #[serde(rename = "-")]
    AntiSelfDual,
}

impl Chirality {
    pub const BOTH: [Chirality; 2] = [Chirality::SelfDual, Chirality::AntiSelfDual];

    pub fn sign(self) -> f64 {
        match self {
            Chirality::SelfDual => 1.0,
            Chirality::AntiSelfDual => -1.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Chirality::SelfDual => Chirality::AntiSelfDual,
            Chirality::AntiSelfDual => Chirality::SelfDual,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Chirality::SelfDual => "+",
            Chirality::AntiSelfDual => "-",
        }
    }
}

/// Ordered basis of `Λ²` chosen so that entry `a + 3` is the Hodge dual of
/// entry `a`: `(01)↔(23)`, `(02)↔(31)`, `(03)↔(12)`.
pub const LAMBDA2_BASIS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2)];

// DUAL[i][j] = (i', j') for i != j
const DUAL: [[(usize, usize); 4]; 4] = build_dual_table();

const fn build_dual_table() -> [[(usize, usize); 4]; 4] {
    let mut t = [[(usize::MAX, usize::MAX); 4]; 4];
    let mut i = 0;
    while i < 4 {
        let mut j = 0;
        while j < 4 {
            if i != j {
                // the two remaining indices in increasing order
                let mut rest = [0usize; 2];
                let mut n = 0;
                let mut m = 0;
                while m < 4 {
                    if m != i && m != j {
                        rest[n] = m;
                        n += 1;
                    }
                    m += 1;
                }
                let p = [i, j, rest[0], rest[1]];
                let mut inversions = 0;
                let mut a = 0;
                while a < 4 {
                    let mut b = a + 1;
                    while b < 4 {
                        if p[a] > p[b] {
                            inversions += 1;
                        }
                        b += 1;
                    }
                    a += 1;
                }
                t[i][j] = if inversions % 2 == 0 { (rest[0], rest[1]) } else { (rest[1], rest[0]) };
            }
            j += 1;
        }
        i += 1;
    }
    t
}

/// The pair `(i', j')` such that `(i, j, i', j')` is an even permutation of
/// `(0, 1, 2, 3)`; `e_i ∧ e_j ± e_i' ∧ e_j'` lies in `Λ±`.
pub fn dual_pair(i: usize, j: usize) -> Result<(usize, usize), AlgebraError> {
    if i >= 4 || j >= 4 || i == j {
        return Err(AlgebraError::InvalidPair(i, j));
    }
    Ok(DUAL[i][j])
}

/// Unchecked table lookup; callers guarantee `i != j`, both `< 4`.
#[inline]
pub fn hodge_dual_pair(i: usize, j: usize) -> (usize, usize) {
    debug_assert!(i < 4 && j < 4 && i != j);
    DUAL[i][j]
}

/// `T±_ijkl = ¼(T_ijkl ± T_ijk'l' ± T_i'j'kl + T_i'j'k'l')`.
pub fn project_half(t: &FourTensor, chirality: Chirality) -> FourTensor {
    let s = chirality.sign();
    FourTensor::from_fn_unchecked(SymmetryClass::PairAntisymmetric, |i, j, k, l| {
        if i == j || k == l {
            return 0.0;
        }
        let (ip, jp) = DUAL[i][j];
        let (kp, lp) = DUAL[k][l];
        0.25 * (t.get(i, j, k, l) + s * t.get(i, j, kp, lp) + s * t.get(ip, jp, k, l) + t.get(ip, jp, kp, lp))
    })
}

/// `T±_jkl = ½(T_jkl ± T_jk'l')`, the half of a `Λ²`-valued one-form.
pub fn project_half3(t: &ThreeTensor, chirality: Chirality) -> ThreeTensor {
    let s = chirality.sign();
    ThreeTensor::from_fn(|j, k, l| {
        if k == l {
            return 0.0;
        }
        let (kp, lp) = DUAL[k][l];
        0.5 * (t.get(j, k, l) + s * t.get(j, kp, lp))
    })
}

/// The part of `T` mapping `Λ±` into `Λ∓`: `T − T⁺ − T⁻`.
pub fn mixed_part(t: &FourTensor) -> FourTensor {
    let plus = project_half(t, Chirality::SelfDual);
    let minus = project_half(t, Chirality::AntiSelfDual);
    &(t - &plus) - &minus
}
