use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use super::cp2::complex_space_form;
use super::GeometryError;
use crate::algebra::CurvaturePoint;

/// Chart coordinates.
pub type Point = [f64; 4];

/// Catalog identifiers accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelId {
    #[serde(rename = "gaussian")]
    Gaussian,
    #[serde(rename = "s3xr")]
    S3xR,
    #[serde(rename = "s2xr2")]
    S2xR2,
    #[serde(rename = "s4_round")]
    S4Round,
    #[serde(rename = "cp2_point")]
    Cp2Point,
}

impl ModelId {
    pub const ALL: [ModelId; 5] =
        [ModelId::Gaussian, ModelId::S3xR, ModelId::S2xR2, ModelId::S4Round, ModelId::Cp2Point];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelId::Gaussian => "gaussian",
            ModelId::S3xR => "s3xr",
            ModelId::S2xR2 => "s2xr2",
            ModelId::S4Round => "s4_round",
            ModelId::Cp2Point => "cp2_point",
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelId {
    type Err = GeometryError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelId::ALL.into_iter().find(|m| m.as_str() == s).ok_or_else(|| GeometryError::UnknownModel(s.to_string()))
    }
}

/// One-variable factor of a warped diagonal metric component.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Factor {
    One,
    /// `sin² x`
    Sin2,
    /// `e^{c x}`
    Exp(f64),
}

impl Factor {
    /// `n`-th derivative at `x`, `n ≤ 3`.
    pub fn derivative(self, n: usize, x: f64) -> f64 {
        match self {
            Factor::One => {
                if n == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            Factor::Sin2 => match n {
                0 => x.sin().powi(2),
                1 => (2.0 * x).sin(),
                2 => 2.0 * (2.0 * x).cos(),
                3 => -4.0 * (2.0 * x).sin(),
                _ => unimplemented!("only derivatives up to third order are needed"),
            },
            Factor::Exp(c) => c.powi(n as i32) * (c * x).exp(),
        }
    }
}

/// Diagonal metric `g_ii(x) = scale_i Π_v factor[i][v](x_v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WarpedDiagonal {
    pub scale: [f64; 4],
    pub factors: [[Factor; 4]; 4],
}

impl WarpedDiagonal {
    pub fn value(&self, x: &Point) -> Matrix4<f64> {
        self.partial(x, &[])
    }

    /// `∂_{m_1} … ∂_{m_n} g` for a multi-index of length at most three.
    pub fn partial(&self, x: &Point, multi: &[usize]) -> Matrix4<f64> {
        let mut counts = [0usize; 4];
        for &m in multi {
            counts[m] += 1;
        }
        let mut g = Matrix4::zeros();
        for i in 0..4 {
            let mut v = self.scale[i];
            for var in 0..4 {
                v *= self.factors[i][var].derivative(counts[var], x[var]);
            }
            g[(i, i)] = v;
        }
        g
    }
}

/// Potential `f(x) = ½ Σ w_i x_i²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Potential {
    pub weights: [f64; 4],
}

impl Potential {
    pub fn zero() -> Self {
        Self { weights: [0.0; 4] }
    }

    pub fn value(&self, x: &Point) -> f64 {
        0.5 * (0..4).map(|i| self.weights[i] * x[i] * x[i]).sum::<f64>()
    }

    pub fn differential(&self, x: &Point) -> [f64; 4] {
        [0, 1, 2, 3].map(|i| self.weights[i] * x[i])
    }

    pub fn coordinate_hessian(&self) -> Matrix4<f64> {
        Matrix4::from_diagonal(&crate::Vector4::from(self.weights))
    }
}

/// A coordinate chart carrying a metric and a potential.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub metric: WarpedDiagonal,
    pub potential: Potential,
    pub domain: [(f64, f64); 4],
}

#[derive(Clone, Debug, PartialEq)]
enum Realization {
    Chart(Chart),
    /// Homogeneous model known only through its curvature at one point.
    Pointwise(CurvaturePoint),
}

/// A metric with potential function and soliton constant.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricModel {
    name: String,
    id: Option<ModelId>,
    lambda: f64,
    realization: Realization,
}

const POLE_MARGIN: f64 = 0.3;
const ANGLE: (f64, f64) = (POLE_MARGIN, PI - POLE_MARGIN);
const AZIMUTH: (f64, f64) = (-PI, PI);
const LINE: (f64, f64) = (-2.0, 2.0);

/// Builds a catalog model. Radii are fixed by `Ric + ∇²f = λ g`: a round
/// `S^k` factor has `Ric = (k−1)/r² g`, so `r² = (k−1)/λ`; flat factors carry
/// `f = (λ/2)|x|²`.
pub fn make_model(id: ModelId, lambda: f64) -> Result<MetricModel, GeometryError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(GeometryError::NonPositiveLambda(lambda));
    }
    use Factor::{One, Sin2};
    let chart = |scale, factors, weights, domain| Chart {
        metric: WarpedDiagonal { scale, factors },
        potential: Potential { weights },
        domain,
    };
    let realization = match id {
        ModelId::Gaussian => Realization::Chart(chart([1.0; 4], [[One; 4]; 4], [lambda; 4], [LINE; 4])),
        ModelId::S3xR => {
            let r2 = 2.0 / lambda;
            Realization::Chart(chart(
                [r2, r2, r2, 1.0],
                [[One; 4], [Sin2, One, One, One], [Sin2, Sin2, One, One], [One; 4]],
                [0.0, 0.0, 0.0, lambda],
                [ANGLE, ANGLE, AZIMUTH, LINE],
            ))
        }
        ModelId::S2xR2 => {
            let r2 = 1.0 / lambda;
            Realization::Chart(chart(
                [r2, r2, 1.0, 1.0],
                [[One; 4], [Sin2, One, One, One], [One; 4], [One; 4]],
                [0.0, 0.0, lambda, lambda],
                [ANGLE, AZIMUTH, LINE, LINE],
            ))
        }
        ModelId::S4Round => {
            let r2 = 3.0 / lambda;
            Realization::Chart(chart(
                [r2; 4],
                [[One; 4], [Sin2, One, One, One], [Sin2, Sin2, One, One], [Sin2, Sin2, Sin2, One]],
                [0.0; 4],
                [ANGLE, ANGLE, ANGLE, AZIMUTH],
            ))
        }
        // Einstein with Ric = λ g: holomorphic sectional curvature 2λ/3
        ModelId::Cp2Point => Realization::Pointwise(complex_space_form(2.0 * lambda / 3.0)),
    };
    Ok(MetricModel { name: id.as_str().to_string(), id: Some(id), lambda, realization })
}

impl MetricModel {
    /// A chart model outside the catalog. No soliton property is assumed.
    pub fn from_chart(name: impl Into<String>, lambda: f64, chart: Chart) -> Self {
        Self { name: name.into(), id: None, lambda, realization: Realization::Chart(chart) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn id(&self) -> Option<ModelId> {
        self.id
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn chart(&self) -> Option<&Chart> {
        match &self.realization {
            Realization::Chart(c) => Some(c),
            Realization::Pointwise(_) => None,
        }
    }

    pub fn pointwise_curvature(&self) -> Option<&CurvaturePoint> {
        match &self.realization {
            Realization::Chart(_) => None,
            Realization::Pointwise(cp) => Some(cp),
        }
    }

    pub(crate) fn require_chart(&self) -> Result<&Chart, GeometryError> {
        self.chart().ok_or_else(|| GeometryError::Pointwise(self.name.clone()))
    }

    /// `n` chart points from a Halton sequence shifted by a seed-derived
    /// rotation. Pointwise models return `n` copies of the origin.
    pub fn sample_points(&self, n: usize, seed: u64) -> Vec<Point> {
        let Some(chart) = self.chart() else {
            return vec![[0.0; 4]; n];
        };
        let mut state = seed ^ 0x5851_F42D_4C95_7F2D;
        let shift: [f64; 4] = std::array::from_fn(|_| (splitmix64(&mut state) >> 11) as f64 / (1u64 << 53) as f64);
        const BASES: [u64; 4] = [2, 3, 5, 7];
        (1..=n as u64)
            .map(|k| {
                std::array::from_fn(|d| {
                    let u = (radical_inverse(k, BASES[d]) + shift[d]).fract();
                    let (lo, hi) = chart.domain[d];
                    lo + (hi - lo) * u
                })
            })
            .collect()
    }
}

fn radical_inverse(mut k: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut r = 0.0;
    while k > 0 {
        r += (k % base) as f64 * inv;
        k /= base;
        inv /= base as f64;
    }
    r
}

pub(crate) fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_ids_round_trip() {
        for id in ModelId::ALL {
            assert_eq!(id.as_str().parse::<ModelId>().unwrap(), id);
        }
        assert!(matches!("s5".parse::<ModelId>(), Err(GeometryError::UnknownModel(_))));
    }

    #[test]
    fn rejects_nonpositive_lambda() {
        assert!(matches!(make_model(ModelId::S3xR, 0.0), Err(GeometryError::NonPositiveLambda(_))));
        assert!(matches!(make_model(ModelId::Gaussian, -1.0), Err(GeometryError::NonPositiveLambda(_))));
    }

    #[test]
    fn sin2_derivatives_match_differences() {
        let x = 0.7;
        let h = 1e-5;
        for n in 0..3 {
            let fd = (Factor::Sin2.derivative(n, x + h) - Factor::Sin2.derivative(n, x - h)) / (2.0 * h);
            assert!((fd - Factor::Sin2.derivative(n + 1, x)).abs() < 1e-9);
        }
    }

    #[test]
    fn sample_points_are_deterministic_and_inside() {
        let m = make_model(ModelId::S2xR2, 1.0).unwrap();
        let a = m.sample_points(50, 42);
        assert_eq!(a, m.sample_points(50, 42));
        assert_ne!(a, m.sample_points(50, 43));
        let dom = m.chart().unwrap().domain;
        for p in &a {
            for d in 0..4 {
                assert!(p[d] >= dom[d].0 && p[d] <= dom[d].1);
            }
        }
    }
}
