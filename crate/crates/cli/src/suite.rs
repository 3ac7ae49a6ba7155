//! The registered identities and their evaluation at one point.

use halfweyl::algebra::half_weyl_invariants;
use halfweyl::certify::{phi_at_floats, PHI_SCALE};
use halfweyl::geometry::{
    curvature_at, drift_laplacian, kato_terms, soliton_point, soliton_residual, DerivativeScheme, MetricModel, Point,
    GRADIENT_THRESHOLD,
};
use halfweyl::soliton::{
    check_d_norm_chain, check_d_two_path, check_drift_laplacian, check_half_weyl_divergence, check_soliton_curvature,
    eigen_profile, einstein_profile, frame_covariance_defect, half_weyl_gradient, quartic_from_curvature,
    quartic_quantity, weitzenbock_residual, PARALLEL_TOLERANCE,
};
use halfweyl::{Chirality, EigenProfile, HalfWeyl, SolitonPointData, Sym2};

use crate::config::ToleranceTiers;
use crate::report::{Scheme, Tier};

/// A registered identity. `tier` applies on closed-form data; identities
/// with `fd` set are also evaluated on finite-difference data at the FD tier.
#[derive(Clone, Copy, Debug)]
pub struct IdentitySpec {
    pub id: &'static str,
    pub tier: Tier,
    pub fd: bool,
    pub description: &'static str,
}

const fn spec(id: &'static str, tier: Tier, fd: bool, description: &'static str) -> IdentitySpec {
    IdentitySpec { id, tier, fd, description }
}

pub const REGISTRY: &[IdentitySpec] = &[
    spec("soliton.equation", Tier::Analytic, true, "Ric + ∇²f − λg = 0, normed in coordinates"),
    spec("soliton.ricci_curl", Tier::Analytic, true, "∇_k R_jl − ∇_l R_jk = R_ijkl ∇^i f"),
    spec("soliton.rm_divergence", Tier::Analytic, true, "∇^i R_ijkl = R_ijkl ∇^i f"),
    spec("soliton.scalar_gradient", Tier::Analytic, true, "∇_i R = 2∇^j R_ij = 2 R_ij ∇^j f"),
    spec(
        "dtensor.two_path",
        Tier::Analytic,
        true,
        "2∇^i W_ijkl − W_ijkl ∇^i f equals its expression in Ric, ∇f and ∇R",
    ),
    spec("dtensor.norm_chain", Tier::Analytic, false, "|D⁺|² = |D⁻|² = ½|D|² = ¼|R̊c|²|∇f|² − (1/48)|R∇f − 2∇R|²"),
    spec(
        "weyl.half_divergence_plus",
        Tier::Analytic,
        true,
        "R_ijkl ∇^i f + R_ijk'l' ∇^i f = 4∇^i W⁺_ijkl + scalar gradient terms",
    ),
    spec(
        "weyl.half_divergence_minus",
        Tier::Analytic,
        true,
        "R_ijkl ∇^i f − R_ijk'l' ∇^i f = 4∇^i W⁻_ijkl + scalar gradient terms",
    ),
    spec(
        "curvature.bianchi",
        Tier::Algebraic,
        false,
        "first Bianchi identity of the frame curvature, relative to max(1, |Rm|)",
    ),
    spec(
        "frame.covariance",
        Tier::Algebraic,
        false,
        "R, |W±|², det W± and the quartic are unchanged by a rotation of the frame",
    ),
    spec(
        "profile.eigenframe_plus",
        Tier::Analytic,
        false,
        "∇f is a Ricci eigenvector and W⁺ has b_i = −(a_1 + 3a_i)/12 in that frame",
    ),
    spec(
        "profile.eigenframe_minus",
        Tier::Analytic,
        false,
        "∇f is a Ricci eigenvector and W⁻ has b_i = −(a_1 + 3a_i)/12 in that frame",
    ),
    spec(
        "halfweyl.invariants_plus",
        Tier::Algebraic,
        false,
        "|W⁺|² = 4Σb² and det W⁺ = 8b_1b_2b_3 against the tensor invariants",
    ),
    spec(
        "halfweyl.invariants_minus",
        Tier::Algebraic,
        false,
        "|W⁻|² = 4Σb² and det W⁻ = 8b_1b_2b_3 against the tensor invariants",
    ),
    spec("quartic.two_path_plus", Tier::Algebraic, false, "the W⁺ quartic from tensors equals its eigenframe form"),
    spec("quartic.two_path_minus", Tier::Algebraic, false, "the W⁻ quartic from tensors equals its eigenframe form"),
    spec(
        "quartic.exact_plus",
        Tier::Algebraic,
        false,
        "6 × the W⁺ quartic equals φ(R, a2, a3, a4) in exact arithmetic",
    ),
    spec(
        "quartic.exact_minus",
        Tier::Algebraic,
        false,
        "6 × the W⁻ quartic equals φ(R, a2, a3, a4) in exact arithmetic",
    ),
    spec("quartic.sign_plus", Tier::Algebraic, false, "the W⁺ quartic is nonnegative"),
    spec("quartic.sign_minus", Tier::Algebraic, false, "the W⁻ quartic is nonnegative"),
    spec("weitzenbock.parallel_plus", Tier::Algebraic, false, "4λ|W⁺|² − 36 det W⁺ − ⟨(R̊c∘R̊c)⁺, W⁺⟩ = 0 where ∇W⁺ = 0"),
    spec(
        "weitzenbock.parallel_minus",
        Tier::Algebraic,
        false,
        "4λ|W⁻|² − 36 det W⁻ − ⟨(R̊c∘R̊c)⁻, W⁻⟩ = 0 where ∇W⁻ = 0",
    ),
    spec("scalar.drift_laplacian", Tier::Fd, false, "Δ_f R = 2λR − 2|Ric|², with Δ_f R by finite differences"),
    spec("kato.inequality_plus", Tier::Fd, false, "|∇|W⁺||² ≤ |∇W⁺|² where W⁺ ≠ 0"),
    spec("kato.inequality_minus", Tier::Fd, false, "|∇|W⁻||² ≤ |∇W⁻|² where W⁻ ≠ 0"),
];

pub fn lookup(id: &str) -> Option<&'static IdentitySpec> {
    REGISTRY.iter().find(|s| s.id == id)
}

/// What one identity produced at one point.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Checked { id: &'static str, scheme: Scheme, residual: f64, error: Option<String> },
    Skipped { id: &'static str, scheme: Scheme, reason: &'static str },
}

pub fn tolerance(tiers: &ToleranceTiers, tier: Tier) -> f64 {
    match tier {
        Tier::Algebraic => tiers.algebraic,
        Tier::Analytic => tiers.analytic,
        Tier::Fd => tiers.fd,
    }
}

pub fn tier_for(spec: &IdentitySpec, scheme: Scheme) -> Tier {
    match scheme {
        Scheme::Analytic => spec.tier,
        Scheme::FiniteDifference => Tier::Fd,
    }
}

fn tag(id: &'static str, c: Chirality) -> &'static str {
    let (plus, minus) = match id {
        "weyl.half_divergence" => ("weyl.half_divergence_plus", "weyl.half_divergence_minus"),
        "profile.eigenframe" => ("profile.eigenframe_plus", "profile.eigenframe_minus"),
        "halfweyl.invariants" => ("halfweyl.invariants_plus", "halfweyl.invariants_minus"),
        "quartic.two_path" => ("quartic.two_path_plus", "quartic.two_path_minus"),
        "quartic.exact" => ("quartic.exact_plus", "quartic.exact_minus"),
        "quartic.sign" => ("quartic.sign_plus", "quartic.sign_minus"),
        "weitzenbock.parallel" => ("weitzenbock.parallel_plus", "weitzenbock.parallel_minus"),
        "kato.inequality" => ("kato.inequality_plus", "kato.inequality_minus"),
        _ => unreachable!("{id} has no chiral variants"),
    };
    match c {
        Chirality::SelfDual => plus,
        Chirality::AntiSelfDual => minus,
    }
}

fn scheme_of(s: Scheme) -> DerivativeScheme {
    match s {
        Scheme::Analytic => DerivativeScheme::Analytic,
        Scheme::FiniteDifference => DerivativeScheme::FiniteDifference,
    }
}

struct Sink {
    out: Vec<Outcome>,
}

impl Sink {
    fn value(&mut self, id: &'static str, scheme: Scheme, r: Result<f64, String>) {
        let (residual, error) = match r {
            Ok(v) => (v, None),
            Err(e) => (f64::NAN, Some(e)),
        };
        self.out.push(Outcome::Checked { id, scheme, residual, error });
    }

    fn skip(&mut self, id: &'static str, scheme: Scheme, reason: &'static str) {
        self.out.push(Outcome::Skipped { id, scheme, reason });
    }
}

/// Rotation built from six plane rotations with angles from a low-discrepancy
/// sequence in `(seed, index)`.
pub fn test_rotation(seed: u64, index: usize) -> Sym2 {
    const PLANES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    const ROOTS: [f64; 6] = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0];
    let offset = (seed % 1_000_003) as f64 * 0.618_033_988_749_894_9;
    let mut q = Sym2::identity();
    for (p, &(i, j)) in PLANES.iter().enumerate() {
        let u = ((index as f64 + 1.0) * ROOTS[p].sqrt() + offset).fract();
        let (s, c) = (std::f64::consts::TAU * u).sin_cos();
        let mut g = Sym2::identity();
        g[(i, i)] = c;
        g[(j, j)] = c;
        g[(i, j)] = -s;
        g[(j, i)] = s;
        q *= g;
    }
    q
}

/// Scale of the curvature at a point, for residuals of homogeneous
/// expressions.
fn curvature_scale(data: &SolitonPointData) -> f64 {
    data.cp.riemann().max_abs().max(1.0)
}

fn profile(data: &SolitonPointData, c: Chirality, tol: f64) -> Result<EigenProfile, String> {
    if data.grad_f.norm() <= GRADIENT_THRESHOLD {
        Ok(einstein_profile(data, c))
    } else {
        eigen_profile(data, c, tol).map_err(|e| e.to_string())
    }
}

fn schemed(sink: &mut Sink, model: &MetricModel, x: &Point, scheme: Scheme, data: &Result<SolitonPointData, String>) {
    let ds = scheme_of(scheme);
    sink.value("soliton.equation", scheme, soliton_residual(model, x, ds).map_err(|e| e.to_string()));
    let data = match data {
        Ok(d) => d,
        Err(e) => {
            for id in ["soliton.ricci_curl", "soliton.rm_divergence", "soliton.scalar_gradient", "dtensor.two_path"] {
                sink.value(id, scheme, Err(e.clone()));
            }
            for c in Chirality::BOTH {
                sink.value(tag("weyl.half_divergence", c), scheme, Err(e.clone()));
            }
            return;
        }
    };
    match check_soliton_curvature(data, 0.0) {
        Ok(reports) => {
            for (id, r) in
                ["soliton.ricci_curl", "soliton.rm_divergence", "soliton.scalar_gradient"].into_iter().zip(reports)
            {
                sink.value(id, scheme, Ok(r.residual));
            }
        }
        Err(e) => {
            for id in ["soliton.ricci_curl", "soliton.rm_divergence", "soliton.scalar_gradient"] {
                sink.value(id, scheme, Err(e.to_string()));
            }
        }
    }
    sink.value("dtensor.two_path", scheme, check_d_two_path(data, 0.0).map(|r| r.residual).map_err(|e| e.to_string()));
    for c in Chirality::BOTH {
        sink.value(
            tag("weyl.half_divergence", c),
            scheme,
            check_half_weyl_divergence(data, c, 0.0).map(|r| r.residual).map_err(|e| e.to_string()),
        );
    }
}

/// Evaluate every registered identity at `x`. Residuals are returned raw;
/// pass/fail is decided by the caller against the configured tiers.
pub fn evaluate_point(model: &MetricModel, x: &Point, index: usize, seed: u64, tiers: &ToleranceTiers) -> Vec<Outcome> {
    let mut sink = Sink { out: Vec::new() };
    let analytic = soliton_point(model, x, DerivativeScheme::Analytic).map_err(|e| e.to_string());
    let fd = soliton_point(model, x, DerivativeScheme::FiniteDifference).map_err(|e| e.to_string());
    schemed(&mut sink, model, x, Scheme::Analytic, &analytic);
    schemed(&mut sink, model, x, Scheme::FiniteDifference, &fd);

    let a = Scheme::Analytic;
    let data = match analytic {
        Ok(d) => d,
        Err(e) => {
            // the derivative identities were already recorded by `schemed`
            for s in REGISTRY.iter().filter(|s| !s.fd) {
                sink.value(s.id, a, Err(e.clone()));
            }
            return sink.out;
        }
    };
    let scale = curvature_scale(&data);

    sink.value("dtensor.norm_chain", a, Ok(check_d_norm_chain(&data, 0.0).residual));
    sink.value("curvature.bianchi", a, Ok(data.cp.riemann().bianchi_defect() / scale));
    sink.value("frame.covariance", a, Ok(frame_covariance_defect(&data.cp, &test_rotation(seed, index))));

    let einstein = data.grad_f.norm() <= GRADIENT_THRESHOLD;
    for c in Chirality::BOTH {
        let w = HalfWeyl::of(&data.cp, c);
        let inv = half_weyl_invariants(&w);
        let p = profile(&data, c, tiers.analytic);
        if einstein {
            sink.skip(tag("profile.eigenframe", c), a, "Einstein point: no eigenframe");
            sink.skip(tag("halfweyl.invariants", c), a, "Einstein point: no eigenframe");
        } else {
            sink.value(
                tag("profile.eigenframe", c),
                a,
                p.as_ref()
                    .map(|p| {
                        let predicted = EigenProfile::predicted_b(&p.a);
                        (0..3).map(|i| (p.b[i] - predicted[i]).abs()).fold(p.trace_defect(), f64::max)
                    })
                    .map_err(Clone::clone),
            );
            sink.value(
                tag("halfweyl.invariants", c),
                a,
                p.as_ref()
                    .map(|p| {
                        let n = (inv.norm_sq - p.weyl_norm_sq()).abs() / scale.powi(2);
                        n.max((inv.det - p.weyl_det()).abs() / scale.powi(3))
                    })
                    .map_err(Clone::clone),
            );
        }

        let quartic = quartic_from_curvature(&data.cp, c);
        let s4 = scale.powi(4);
        sink.value(
            tag("quartic.two_path", c),
            a,
            p.as_ref().map(|p| (quartic - quartic_quantity(p)).abs() / s4).map_err(Clone::clone),
        );
        sink.value(
            tag("quartic.exact", c),
            a,
            p.as_ref().map_err(Clone::clone).and_then(|p| {
                let phi = phi_at_floats(p.scalar, p.a[1], p.a[2], p.a[3]).ok_or("non-finite profile")?;
                Ok((PHI_SCALE as f64 * quartic_quantity(p) - phi).abs() / s4)
            }),
        );
        sink.value(tag("quartic.sign", c), a, Ok((-quartic).max(0.0) / s4));

        let parallel = half_weyl_gradient(&data, c).is_some_and(|g| g <= PARALLEL_TOLERANCE);
        if parallel {
            sink.value(
                tag("weitzenbock.parallel", c),
                a,
                weitzenbock_residual(&data, c, true, 0.0)
                    .map(|r| r.residual / scale.powi(3))
                    .map_err(|e| e.to_string()),
            );
        } else {
            sink.skip(tag("weitzenbock.parallel", c), a, "half Weyl tensor is not parallel");
        }
    }

    let lap = if model.chart().is_some() {
        let field =
            |p: &Point| curvature_at(model, p, DerivativeScheme::Analytic).map(|cp| cp.scalar()).unwrap_or(f64::NAN);
        drift_laplacian(model, &field, x).map_err(|e| e.to_string())
    } else {
        // homogeneous: R is constant
        Ok(0.0)
    };
    sink.value("scalar.drift_laplacian", a, lap.map(|l| check_drift_laplacian(&data, l, 0.0).residual));

    for c in Chirality::BOTH {
        match kato_terms(model, x, c, DerivativeScheme::Analytic) {
            Ok(Some(k)) => sink.value(tag("kato.inequality", c), a, Ok((k.grad_norm_sq - k.grad_sq).max(0.0))),
            Ok(None) => sink.skip(tag("kato.inequality", c), a, "half Weyl tensor vanishes"),
            Err(e) => sink.value(tag("kato.inequality", c), a, Err(e.to_string())),
        }
    }
    sink.out
}
