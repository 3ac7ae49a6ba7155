use nalgebra::Matrix4;

use super::jet::MetricJet;

pub type Array3 = [[[f64; 4]; 4]; 4];
pub type Array4 = [[[[f64; 4]; 4]; 4]; 4];
pub type Array5 = [[[[[f64; 4]; 4]; 4]; 4]; 4];

const R4: std::ops::Range<usize> = 0..4;

/// Levi-Civita connection data in coordinates, through the derivatives that
/// `∇Rm` requires.
#[derive(Clone, Debug)]
pub struct Connection {
    pub g: Matrix4<f64>,
    pub dg: [Matrix4<f64>; 4],
    pub ginv: Matrix4<f64>,
    /// `gamma[k][i][j] = Γ^k_ij`
    pub gamma: Array3,
    /// `dgamma[a][k][i][j] = ∂_a Γ^k_ij`
    pub dgamma: Array4,
    /// `d2gamma[a][b][k][i][j] = ∂_a ∂_b Γ^k_ij`
    pub d2gamma: Array5,
}

impl Connection {
    /// Returns `None` when the metric is not invertible.
    pub fn from_jet(jet: &MetricJet) -> Option<Self> {
        let ginv = jet.g.try_inverse()?;
        let dginv: [Matrix4<f64>; 4] = std::array::from_fn(|a| -(ginv * jet.d1[a] * ginv));
        let d2ginv: [[Matrix4<f64>; 4]; 4] = std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                -(dginv[b] * jet.d1[a] * ginv + ginv * jet.d2[a][b] * ginv + ginv * jet.d1[a] * dginv[b])
            })
        });

        // lower symbols Γ_{l,ij} = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij) and their derivatives
        let lower = |l: usize, i: usize, j: usize| 0.5 * (jet.d1[i][(j, l)] + jet.d1[j][(i, l)] - jet.d1[l][(i, j)]);
        let lower_d = |a: usize, l: usize, i: usize, j: usize| {
            0.5 * (jet.d2[a][i][(j, l)] + jet.d2[a][j][(i, l)] - jet.d2[a][l][(i, j)])
        };
        let lower_dd = |a: usize, b: usize, l: usize, i: usize, j: usize| {
            0.5 * (jet.d3[a][b][i][(j, l)] + jet.d3[a][b][j][(i, l)] - jet.d3[a][b][l][(i, j)])
        };

        let mut gamma = [[[0.0; 4]; 4]; 4];
        let mut dgamma = [[[[0.0; 4]; 4]; 4]; 4];
        let mut d2gamma = [[[[[0.0; 4]; 4]; 4]; 4]; 4];
        for k in R4 {
            for i in R4 {
                for j in R4 {
                    gamma[k][i][j] = R4.map(|l| ginv[(k, l)] * lower(l, i, j)).sum();
                    for a in R4 {
                        dgamma[a][k][i][j] =
                            R4.map(|l| dginv[a][(k, l)] * lower(l, i, j) + ginv[(k, l)] * lower_d(a, l, i, j)).sum();
                        for b in R4 {
                            d2gamma[a][b][k][i][j] = R4
                                .map(|l| {
                                    d2ginv[a][b][(k, l)] * lower(l, i, j)
                                        + dginv[a][(k, l)] * lower_d(b, l, i, j)
                                        + dginv[b][(k, l)] * lower_d(a, l, i, j)
                                        + ginv[(k, l)] * lower_dd(a, b, l, i, j)
                                })
                                .sum();
                        }
                    }
                }
            }
        }
        Some(Self { g: jet.g, dg: jet.d1, ginv, gamma, dgamma, d2gamma })
    }

    /// `Rs^a_bcd = ∂_c Γ^a_db − ∂_d Γ^a_cb + Γ^a_ce Γ^e_db − Γ^a_de Γ^e_cb`
    /// and its coordinate derivative `∂_m Rs^a_bcd` (index `m` first).
    fn mixed_riemann(&self) -> (Array4, Array5) {
        let (gm, dg, ddg) = (&self.gamma, &self.dgamma, &self.d2gamma);
        let mut rs = [[[[0.0; 4]; 4]; 4]; 4];
        let mut drs = [[[[[0.0; 4]; 4]; 4]; 4]; 4];
        for a in R4 {
            for b in R4 {
                for c in R4 {
                    for d in R4 {
                        let quad: f64 = R4.map(|e| gm[a][c][e] * gm[e][d][b] - gm[a][d][e] * gm[e][c][b]).sum();
                        rs[a][b][c][d] = dg[c][a][d][b] - dg[d][a][c][b] + quad;
                        for m in R4 {
                            let dquad: f64 = R4
                                .map(|e| {
                                    dg[m][a][c][e] * gm[e][d][b] + gm[a][c][e] * dg[m][e][d][b]
                                        - dg[m][a][d][e] * gm[e][c][b]
                                        - gm[a][d][e] * dg[m][e][c][b]
                                })
                                .sum();
                            drs[m][a][b][c][d] = ddg[m][c][a][d][b] - ddg[m][d][a][c][b] + dquad;
                        }
                    }
                }
            }
        }
        (rs, drs)
    }

    /// Lowered curvature `R_ijkl = g_ka Rs^a_lij` (so `R_ijij` is sectional) and
    /// its covariant derivative `∇_m R_ijkl` (index `m` first).
    pub fn curvature(&self) -> (Array4, Array5) {
        let (rs, drs) = self.mixed_riemann();
        let mut r = [[[[0.0; 4]; 4]; 4]; 4];
        let mut dr = [[[[[0.0; 4]; 4]; 4]; 4]; 4];
        for i in R4 {
            for j in R4 {
                for k in R4 {
                    for l in R4 {
                        r[i][j][k][l] = R4.map(|a| self.g[(k, a)] * rs[a][l][i][j]).sum();
                        for m in R4 {
                            dr[m][i][j][k][l] = R4
                                .map(|a| self.dg[m][(k, a)] * rs[a][l][i][j] + self.g[(k, a)] * drs[m][a][l][i][j])
                                .sum();
                        }
                    }
                }
            }
        }
        let gm = &self.gamma;
        let mut nabla = dr;
        for m in R4 {
            for i in R4 {
                for j in R4 {
                    for k in R4 {
                        for l in R4 {
                            let corr: f64 = R4
                                .map(|p| {
                                    gm[p][m][i] * r[p][j][k][l]
                                        + gm[p][m][j] * r[i][p][k][l]
                                        + gm[p][m][k] * r[i][j][p][l]
                                        + gm[p][m][l] * r[i][j][k][p]
                                })
                                .sum();
                            nabla[m][i][j][k][l] -= corr;
                        }
                    }
                }
            }
        }
        (r, nabla)
    }
}
