use nalgebra::Matrix4;

use super::connection::{Array3, Connection};
use super::jet::{DerivativeScheme, MetricJet, FD_STEP};
use super::model::{Chart, MetricModel, Point};
use super::GeometryError;
use crate::algebra::{
    curvature_projection, inner4, project_half, Chirality, CurvaturePoint, FourTensor, HalfWeyl, Orientation,
    SymmetryClass,
};
use crate::soliton::{NablaRm, SolitonPointData};
use crate::{Sym2, Vector4};

/// `|∇f|` at or below this is treated as zero.
pub const GRADIENT_THRESHOLD: f64 = 1e-8;

/// An orthonormal frame at a chart point; column `a` holds the coordinate
/// components of `e_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointFrame {
    pub x: Point,
    pub frame: Matrix4<f64>,
}

impl PointFrame {
    /// `max |Eᵀ g E − I|`.
    pub fn orthonormality_defect(&self, g: &Matrix4<f64>) -> f64 {
        (self.frame.transpose() * g * self.frame - Matrix4::identity()).abs().max()
    }
}

// difference stencils around boundary points may step slightly outside the box
const DOMAIN_SLACK: f64 = 0.05;

struct Local<'a> {
    chart: &'a Chart,
    conn: Connection,
}

fn local<'a>(model: &'a MetricModel, x: &Point, scheme: DerivativeScheme) -> Result<Local<'a>, GeometryError> {
    let chart = model.require_chart()?;
    for (d, &(lo, hi)) in chart.domain.iter().enumerate() {
        if !(x[d] >= lo - DOMAIN_SLACK && x[d] <= hi + DOMAIN_SLACK) {
            return Err(GeometryError::OutsideDomain { model: model.name().to_string(), point: *x });
        }
    }
    let jet = match scheme {
        DerivativeScheme::Analytic => MetricJet::analytic(&chart.metric, x),
        DerivativeScheme::FiniteDifference => MetricJet::finite_difference(|p| chart.metric.value(p), x),
    };
    if jet.g.cholesky().is_none() {
        return Err(GeometryError::SingularMetric(*x));
    }
    let conn = Connection::from_jet(&jet).ok_or(GeometryError::SingularMetric(*x))?;
    let finite = conn.d2gamma.iter().flatten().flatten().flatten().flatten().all(|v| v.is_finite());
    if !finite {
        return Err(GeometryError::DerivativeFailure(*x));
    }
    Ok(Local { chart, conn })
}

/// Christoffel symbols, `out[k][i][j] = Γ^k_ij`.
pub fn christoffel(model: &MetricModel, x: &Point, scheme: DerivativeScheme) -> Result<Array3, GeometryError> {
    Ok(local(model, x, scheme)?.conn.gamma)
}

/// Gram–Schmidt in `g` of `(∇f, ∂_0, …, ∂_3)`, dropping `∇f` when it is
/// negligible and any candidate already in the span. The last vector is
/// flipped if needed so the frame is positively oriented.
pub fn frame_at(model: &MetricModel, x: &Point) -> Result<PointFrame, GeometryError> {
    if model.pointwise_curvature().is_some() {
        return Ok(PointFrame { x: *x, frame: Matrix4::identity() });
    }
    let loc = local(model, x, DerivativeScheme::Analytic)?;
    Ok(build_frame(&loc, x))
}

fn build_frame(loc: &Local<'_>, x: &Point) -> PointFrame {
    let g = &loc.conn.g;
    let ip = |u: &Vector4, v: &Vector4| (u.transpose() * g * v)[(0, 0)];
    let df = Vector4::from(loc.chart.potential.differential(x));
    let grad = loc.conn.ginv * df;
    let mut candidates = Vec::with_capacity(5);
    if ip(&grad, &grad).sqrt() > GRADIENT_THRESHOLD {
        candidates.push(grad);
    }
    candidates.extend((0..4).map(|a| Vector4::ith(a, 1.0)));

    let mut basis: Vec<Vector4> = Vec::with_capacity(4);
    for c in candidates {
        if basis.len() == 4 {
            break;
        }
        let scale = ip(&c, &c).sqrt();
        let mut v = c;
        // two passes keep the result orthonormal to roundoff
        for _ in 0..2 {
            for e in &basis {
                v -= e * ip(e, &v);
            }
        }
        let n = ip(&v, &v).sqrt();
        if n > 1e-6 * scale {
            basis.push(v / n);
        }
    }
    let mut frame = Matrix4::from_columns(&basis);
    if frame.determinant() < 0.0 {
        frame.set_column(3, &(-frame.column(3)));
    }
    PointFrame { x: *x, frame }
}

fn tensor4(a: &super::connection::Array4) -> FourTensor {
    FourTensor::from_fn_unchecked(SymmetryClass::PairAntisymmetric, |i, j, k, l| a[i][j][k][l])
}

struct Evaluated {
    cp: CurvaturePoint,
    nabla: NablaRm,
    loc_hess: Sym2,
    grad_f: Vector4,
}

fn evaluate(model: &MetricModel, x: &Point, scheme: DerivativeScheme) -> Result<Evaluated, GeometryError> {
    let loc = local(model, x, scheme)?;
    let frame = build_frame(&loc, x);
    let e = &frame.frame;
    let (r, nabla_coord) = loc.conn.curvature();

    let rf = tensor4(&r).rotated(e);
    let riemann = match scheme {
        DerivativeScheme::Analytic => rf,
        DerivativeScheme::FiniteDifference => curvature_projection(&rf),
    };
    let cp = match scheme {
        DerivativeScheme::Analytic => CurvaturePoint::new(riemann, Orientation::Positive)?,
        DerivativeScheme::FiniteDifference => {
            CurvaturePoint::new(riemann, Orientation::Positive).expect("projected tensor is curvature-like")
        }
    };

    let rotated: [FourTensor; 4] = std::array::from_fn(|m| tensor4(&nabla_coord[m]).rotated(e));
    let comps: [FourTensor; 4] = std::array::from_fn(|a| {
        let mut acc = FourTensor::zero(SymmetryClass::PairAntisymmetric);
        for (m, t) in rotated.iter().enumerate() {
            acc = &acc + &t.scaled(e[(m, a)]);
        }
        match scheme {
            DerivativeScheme::Analytic => {
                FourTensor::from_fn(SymmetryClass::CurvatureLike, |i, j, k, l| acc.get(i, j, k, l))
                    .unwrap_or_else(|_| curvature_projection(&acc))
            }
            DerivativeScheme::FiniteDifference => curvature_projection(&acc),
        }
    });

    let pot = &loc.chart.potential;
    let df = Vector4::from(pot.differential(x));
    let gm = &loc.conn.gamma;
    let hess_coord = pot.coordinate_hessian() - Sym2::from_fn(|a, b| (0..4).map(|k| gm[k][a][b] * df[k]).sum());
    Ok(Evaluated {
        cp,
        nabla: NablaRm::new(comps),
        loc_hess: e.transpose() * hess_coord * e,
        grad_f: e.transpose() * df,
    })
}

/// Curvature in the frame of [`frame_at`].
pub fn curvature_at(model: &MetricModel, x: &Point, scheme: DerivativeScheme) -> Result<CurvaturePoint, GeometryError> {
    if let Some(cp) = model.pointwise_curvature() {
        return Ok(cp.clone());
    }
    Ok(evaluate(model, x, scheme)?.cp)
}

/// Everything the soliton identities consume, in the frame of [`frame_at`].
/// Pointwise models are homogeneous: `∇Rm = 0` and `f` is constant.
pub fn soliton_point(
    model: &MetricModel,
    x: &Point,
    scheme: DerivativeScheme,
) -> Result<SolitonPointData, GeometryError> {
    if let Some(cp) = model.pointwise_curvature() {
        let data = SolitonPointData::algebraic(cp.clone(), Vector4::zeros(), model.lambda());
        return Ok(data.with_nabla_rm(NablaRm::zero()));
    }
    let ev = evaluate(model, x, scheme)?;
    let grad_r = ev.nabla.scalar_gradient();
    let data = SolitonPointData {
        cp: ev.cp,
        grad_f: ev.grad_f,
        hess_f: ev.loc_hess,
        grad_r,
        nabla_rm: None,
        lambda: model.lambda(),
        del_w_plus: None,
        del_w_minus: None,
    };
    Ok(data.with_nabla_rm(ev.nabla))
}

/// Norm of `A = Ric + ∇²f − λg`, computed from coordinate components as
/// `√tr(g⁻¹A g⁻¹A)` so no frame enters.
pub fn soliton_residual(model: &MetricModel, x: &Point, scheme: DerivativeScheme) -> Result<f64, GeometryError> {
    if model.pointwise_curvature().is_some() {
        return Ok(soliton_point(model, x, scheme)?.soliton_residual());
    }
    let loc = local(model, x, scheme)?;
    let (r, _) = loc.conn.curvature();
    let gi = &loc.conn.ginv;
    let ric = Sym2::from_fn(|i, k| {
        let mut s = 0.0;
        for j in 0..4 {
            for l in 0..4 {
                s += gi[(j, l)] * r[i][j][k][l];
            }
        }
        s
    });
    let pot = &loc.chart.potential;
    let df = pot.differential(x);
    let gm = &loc.conn.gamma;
    let hess = pot.coordinate_hessian() - Sym2::from_fn(|a, b| (0..4).map(|k| gm[k][a][b] * df[k]).sum());
    let a = ric + hess - loc.conn.g * model.lambda();
    let m = gi * a;
    Ok((m * m).trace().max(0.0).sqrt())
}

/// Coordinate gradient and Hessian of a scalar field by Richardson-extrapolated
/// central differences.
fn field_derivatives(field: &dyn Fn(&Point) -> f64, x: &Point) -> ([f64; 4], [[f64; 4]; 4]) {
    let scale = 1.0 + x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let (h1, h2) = (FD_STEP * scale, 1e-3 * scale);
    let at = |offs: &[(usize, f64)]| {
        let mut p = *x;
        for &(a, h) in offs {
            p[a] += h;
        }
        field(&p)
    };
    let first = |a: usize, h: f64| (at(&[(a, h)]) - at(&[(a, -h)])) / (2.0 * h);
    let second = |a: usize, b: usize, h: f64| {
        if a == b {
            (at(&[(a, h)]) - 2.0 * at(&[]) + at(&[(a, -h)])) / (h * h)
        } else {
            (at(&[(a, h), (b, h)]) - at(&[(a, h), (b, -h)]) - at(&[(a, -h), (b, h)]) + at(&[(a, -h), (b, -h)]))
                / (4.0 * h * h)
        }
    };
    let rich = |c: f64, f: f64| (4.0 * f - c) / 3.0;
    let grad = std::array::from_fn(|a| rich(first(a, h1), first(a, h1 / 2.0)));
    let mut hess = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in a..4 {
            let v = rich(second(a, b, h2), second(a, b, h2 / 2.0));
            hess[a][b] = v;
            hess[b][a] = v;
        }
    }
    (grad, hess)
}

/// `Δ_f u = Δu − ⟨∇f, ∇u⟩`; derivatives of `u` by finite differences, the
/// connection in closed form.
pub fn drift_laplacian(model: &MetricModel, field: &dyn Fn(&Point) -> f64, x: &Point) -> Result<f64, GeometryError> {
    let loc = local(model, x, DerivativeScheme::Analytic)?;
    let (du, ddu) = field_derivatives(field, x);
    let df = loc.chart.potential.differential(x);
    let (gi, gm) = (&loc.conn.ginv, &loc.conn.gamma);
    let mut lap = 0.0;
    let mut drift = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let cov = ddu[i][j] - (0..4).map(|k| gm[k][i][j] * du[k]).sum::<f64>();
            lap += gi[(i, j)] * cov;
            drift += gi[(i, j)] * df[i] * du[j];
        }
    }
    let out = lap - drift;
    if out.is_finite() {
        Ok(out)
    } else {
        Err(GeometryError::DerivativeFailure(*x))
    }
}

/// Both sides of the Kato inequality `|∇W±|² ≥ |∇|W±||²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KatoTerms {
    pub grad_sq: f64,
    pub grad_norm_sq: f64,
}

/// `None` where `W± = 0`, since `|W±|` is not differentiable there.
pub fn kato_terms(
    model: &MetricModel,
    x: &Point,
    chirality: Chirality,
    scheme: DerivativeScheme,
) -> Result<Option<KatoTerms>, GeometryError> {
    if model.pointwise_curvature().is_some() {
        return Ok(Some(KatoTerms { grad_sq: 0.0, grad_norm_sq: 0.0 }));
    }
    let data = soliton_point(model, x, scheme)?;
    let norm_at = |p: &Point| -> f64 {
        curvature_at(model, p, DerivativeScheme::Analytic)
            .map(|cp| {
                let w = HalfWeyl::of(&cp, chirality);
                inner4(w.tensor(), w.tensor()).sqrt()
            })
            .unwrap_or(f64::NAN)
    };
    if norm_at(x) < 1e-6 {
        return Ok(None);
    }
    let nabla = data.nabla_rm.as_ref().expect("chart points carry curvature derivatives");
    let grad_sq: f64 = nabla
        .weyl()
        .iter()
        .map(|t| {
            let h = project_half(t, chirality);
            inner4(&h, &h)
        })
        .sum();
    let (dn, _) = field_derivatives(&norm_at, x);
    let ginv = local(model, x, DerivativeScheme::Analytic)?.conn.ginv;
    let dn = Vector4::from(dn);
    let grad_norm_sq = (dn.transpose() * ginv * dn)[(0, 0)];
    if !grad_norm_sq.is_finite() {
        return Err(GeometryError::DerivativeFailure(*x));
    }
    Ok(Some(KatoTerms { grad_sq, grad_norm_sq }))
}
