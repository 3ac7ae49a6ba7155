use serde::{Deserialize, Serialize};

/// Spectral data at a non-Einstein point of a soliton with harmonic half
/// Weyl curvature: traceless Ricci eigenvalues `a` with `e_0 = ∇f/|∇f|`,
/// half Weyl diagonal entries `b_a = W±(e_0, e_{a+1}, e_0, e_{a+1})`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenProfile {
    pub a: [f64; 4],
    pub b: [f64; 3],
    pub scalar: f64,
    pub grad_f_norm: f64,
}

impl EigenProfile {
    /// `max(|Σ a|, |Σ b|)`.
    pub fn trace_defect(&self) -> f64 {
        self.a.iter().sum::<f64>().abs().max(self.b.iter().sum::<f64>().abs())
    }

    /// The `b` predicted from `a` alone: `b_a = −(a_0 + 3 a_{a+1}) / 12`.
    pub fn predicted_b(a: &[f64; 4]) -> [f64; 3] {
        [1, 2, 3].map(|i| -(a[0] + 3.0 * a[i]) / 12.0)
    }

    /// `|W±|² = 4 Σ b²`.
    pub fn weyl_norm_sq(&self) -> f64 {
        4.0 * self.b.iter().map(|x| x * x).sum::<f64>()
    }

    /// Operator determinant `Π 2b`.
    pub fn weyl_det(&self) -> f64 {
        8.0 * self.b[0] * self.b[1] * self.b[2]
    }

    pub fn traceless_ricci_norm_sq(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum()
    }

    /// `⟨(R̊c∘R̊c)±, W±⟩ = 2[b₁(a₀a₁ + a₂a₃) + b₂(a₀a₂ + a₁a₃) + b₃(a₀a₃ + a₁a₂)]`.
    pub fn ricci_weyl_pairing(&self) -> f64 {
        let a = &self.a;
        2.0 * (self.b[0] * (a[0] * a[1] + a[2] * a[3])
            + self.b[1] * (a[0] * a[2] + a[1] * a[3])
            + self.b[2] * (a[0] * a[3] + a[1] * a[2]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predicted_b_is_trace_free() {
        let a = [0.3, -1.1, 0.5, 0.3];
        let b = EigenProfile::predicted_b(&a);
        assert!(b.iter().sum::<f64>().abs() < 1e-16);
        // second form of the same formula
        let alt =
            [(a[2] + a[3] - 2.0 * a[1]) / 12.0, (a[1] + a[3] - 2.0 * a[2]) / 12.0, (a[1] + a[2] - 2.0 * a[3]) / 12.0];
        for (x, y) in b.iter().zip(alt) {
            assert!((x - y).abs() < 1e-16);
        }
    }
}
