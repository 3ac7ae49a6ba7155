use nalgebra::Matrix4;

use super::model::{Point, WarpedDiagonal};

/// How metric derivatives are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeScheme {
    /// Closed-form derivatives of the chart components.
    Analytic,
    /// Central differences of metric values with Richardson extrapolation.
    FiniteDifference,
}

impl DerivativeScheme {
    pub const BOTH: [DerivativeScheme; 2] = [DerivativeScheme::Analytic, DerivativeScheme::FiniteDifference];

    pub fn as_str(self) -> &'static str {
        match self {
            DerivativeScheme::Analytic => "analytic",
            DerivativeScheme::FiniteDifference => "finite_difference",
        }
    }
}

/// Base step for first derivatives.
pub const FD_STEP: f64 = 1e-5;

/// Steps per derivative order, each multiplied by `1 + |x|`. Higher orders
/// use larger steps so that roundoff `ε/hⁿ` stays below the truncation error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdSteps {
    pub first: f64,
    pub second: f64,
    pub third: f64,
}

impl Default for FdSteps {
    fn default() -> Self {
        Self { first: FD_STEP, second: 1e-3, third: 8e-3 }
    }
}

/// Metric and its coordinate derivatives through third order at a point.
#[derive(Clone, Debug)]
pub struct MetricJet {
    pub g: Matrix4<f64>,
    pub d1: [Matrix4<f64>; 4],
    pub d2: [[Matrix4<f64>; 4]; 4],
    pub d3: [[[Matrix4<f64>; 4]; 4]; 4],
}

impl MetricJet {
    pub fn analytic(metric: &WarpedDiagonal, x: &Point) -> Self {
        Self {
            g: metric.value(x),
            d1: std::array::from_fn(|a| metric.partial(x, &[a])),
            d2: std::array::from_fn(|a| std::array::from_fn(|b| metric.partial(x, &[a, b]))),
            d3: std::array::from_fn(|a| {
                std::array::from_fn(|b| std::array::from_fn(|c| metric.partial(x, &[a, b, c])))
            }),
        }
    }

    /// Differences of `g` evaluated at values only.
    pub fn finite_difference(g: impl Fn(&Point) -> Matrix4<f64>, x: &Point) -> Self {
        Self::finite_difference_with(g, x, FdSteps::default())
    }

    pub fn finite_difference_with(g: impl Fn(&Point) -> Matrix4<f64>, x: &Point, steps: FdSteps) -> Self {
        let scale = 1.0 + x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let (h1, h2, h3) = (steps.first * scale, steps.second * scale, steps.third * scale);
        let shift = |p: &Point, a: usize, h: f64| {
            let mut q = *p;
            q[a] += h;
            q
        };
        let first = |p: &Point, a: usize, h: f64| (g(&shift(p, a, h)) - g(&shift(p, a, -h))) / (2.0 * h);
        let second = |p: &Point, a: usize, b: usize, h: f64| {
            if a == b {
                (g(&shift(p, a, h)) - g(p) * 2.0 + g(&shift(p, a, -h))) / (h * h)
            } else {
                let pp = shift(&shift(p, a, h), b, h);
                let pm = shift(&shift(p, a, h), b, -h);
                let mp = shift(&shift(p, a, -h), b, h);
                let mm = shift(&shift(p, a, -h), b, -h);
                (g(&pp) - g(&pm) - g(&mp) + g(&mm)) / (4.0 * h * h)
            }
        };
        let third = |a: usize, b: usize, c: usize, h: f64| {
            (second(&shift(x, c, h), a, b, h) - second(&shift(x, c, -h), a, b, h)) / (2.0 * h)
        };
        // one Richardson level removes the h² term of every stencil above
        let rich = |coarse: Matrix4<f64>, fine: Matrix4<f64>| (fine * 4.0 - coarse) / 3.0;
        // third derivatives take a second level, removing h⁴ as well
        let rich2 = |h: Matrix4<f64>, h2: Matrix4<f64>, h4: Matrix4<f64>| (rich(h2, h4) * 16.0 - rich(h, h2)) / 15.0;

        let d1 = std::array::from_fn(|a| rich(first(x, a, h1), first(x, a, h1 / 2.0)));
        let mut d2 = [[Matrix4::zeros(); 4]; 4];
        for a in 0..4 {
            for b in a..4 {
                let v = rich(second(x, a, b, h2), second(x, a, b, h2 / 2.0));
                d2[a][b] = v;
                d2[b][a] = v;
            }
        }
        let mut d3 = [[[Matrix4::zeros(); 4]; 4]; 4];
        for a in 0..4 {
            for b in a..4 {
                for c in b..4 {
                    let v = rich2(third(a, b, c, h3), third(a, b, c, h3 / 2.0), third(a, b, c, h3 / 4.0));
                    for (i, j, k) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                        d3[i][j][k] = v;
                    }
                }
            }
        }
        Self { g: g(x), d1, d2, d3 }
    }

    pub fn max_abs_diff(&self, other: &Self) -> [f64; 4] {
        let m = |a: &Matrix4<f64>, b: &Matrix4<f64>| (a - b).abs().max();
        let mut out = [m(&self.g, &other.g), 0.0, 0.0, 0.0];
        for a in 0..4 {
            out[1] = out[1].max(m(&self.d1[a], &other.d1[a]));
            for b in 0..4 {
                out[2] = out[2].max(m(&self.d2[a][b], &other.d2[a][b]));
                for c in 0..4 {
                    out[3] = out[3].max(m(&self.d3[a][b][c], &other.d3[a][b][c]));
                }
            }
        }
        out
    }
}
