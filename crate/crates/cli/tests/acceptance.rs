//! The acceptance suite: one line per criterion, `PASS` or `FAIL`, then a
//! single assertion over all of them. Lines go straight to stderr so they
//! show up even when the harness captures test output.

use std::io::Write;
use std::time::{Duration, Instant};

use halfweyl::algebra::half_weyl_invariants;
use halfweyl::certify::{
    classify_equality, phi_at_floats, quotient_form, rat, sample_certify, symbolic_certificates, timofte_factored,
    timofte_specialize, EqualityClass, Family, RationalPoly, Var, PHI_SCALE,
};
use halfweyl::geometry::{make_model, soliton_point, soliton_residual, DerivativeScheme, ModelId, GRADIENT_THRESHOLD};
use halfweyl::soliton::{
    check_d_norm_chain, check_soliton_curvature, d_norm_terms, eigen_profile, einstein_profile, quartic_quantity,
    weitzenbock_terms,
};
use halfweyl::{Chirality, CurvaturePoint, HalfWeyl, SolitonPointData, Sym2, Vector4};
use halfweyl_cli::{run_certify, run_verify, RunConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use DerivativeScheme::{Analytic, FiniteDifference};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(elapsed: Duration, limit: f64) -> bool {
    elapsed.as_secs_f64() < limit
}

const CHART_MODELS: [ModelId; 4] = [ModelId::Gaussian, ModelId::S3xR, ModelId::S2xR2, ModelId::S4Round];

fn soliton_residual_bound() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for id in [ModelId::Gaussian, ModelId::S3xR, ModelId::S2xR2] {
        let m = make_model(id, 1.0).unwrap();
        for x in m.sample_points(100, 42) {
            worst = worst.max(soliton_residual(&m, &x, Analytic).unwrap());
        }
    }
    let t = start.elapsed();
    outcome(worst <= 1e-9 && within(t, 5.0), format!("max residual {worst:.2e}, {t:.2?}"))
}

fn soliton_curvature_identities() -> Outcome {
    let (mut analytic, mut fd) = (0.0_f64, 0.0_f64);
    for id in CHART_MODELS {
        let m = make_model(id, 1.0).unwrap();
        for x in m.sample_points(100, 42) {
            for (scheme, worst) in [(Analytic, &mut analytic), (FiniteDifference, &mut fd)] {
                let data = soliton_point(&m, &x, scheme).unwrap();
                for r in check_soliton_curvature(&data, 0.0).unwrap() {
                    *worst = worst.max(r.residual);
                }
            }
        }
    }
    outcome(analytic <= 1e-9 && fd <= 1e-6, format!("analytic {analytic:.2e}, finite difference {fd:.2e}"))
}

fn random_ricci(rng: &mut ChaCha8Rng) -> Sym2 {
    let m = Sym2::from_fn(|_, _| rng.random_range(-2.0..2.0));
    (m + m.transpose()) * 0.5
}

fn d_tensor_norms() -> Outcome {
    let m = make_model(ModelId::S2xR2, 1.0).unwrap();
    let data = soliton_point(&m, &[1.0, 0.3, 0.6, 0.8], Analytic).unwrap();
    let unit = (data.grad_f.norm() - 1.0).abs() < 1e-12;
    let [plus, minus, half, rhs] = d_norm_terms(&data);
    let anchor = [(2.0 * half, 1.0 / 3.0), (plus, 1.0 / 6.0), (minus, 1.0 / 6.0), (rhs, 1.0 / 6.0)]
        .iter()
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut random = 0.0_f64;
    for _ in 0..1000 {
        let ric = random_ricci(&mut rng);
        let v = Vector4::from_fn(|_, _| rng.random_range(-2.0..2.0));
        let lambda = rng.random_range(0.1..3.0);
        let data = SolitonPointData::algebraic(CurvaturePoint::from_ricci(&ric), v, lambda);
        random = random.max(check_d_norm_chain(&data, 0.0).residual);
    }
    outcome(unit && anchor <= 1e-9 && random <= 1e-12, format!("anchor {anchor:.2e}, 1000 random trials {random:.2e}"))
}

fn eigen_profiles() -> Outcome {
    let s2 = make_model(ModelId::S2xR2, 1.0).unwrap();
    let s3 = make_model(ModelId::S3xR, 1.0).unwrap();
    let (a_want, b_want) = ([-0.5, -0.5, 0.5, 0.5], [1.0 / 6.0, -1.0 / 12.0, -1.0 / 12.0]);
    let (mut s2_dev, mut s3_dev) = (0.0_f64, 0.0_f64);
    for x in s2.sample_points(20, 42) {
        let d = soliton_point(&s2, &x, Analytic).unwrap();
        for c in Chirality::BOTH {
            let p = eigen_profile(&d, c, 1e-9).unwrap();
            let dev = (0..4).map(|i| (p.a[i] - a_want[i]).abs()).chain((0..3).map(|i| (p.b[i] - b_want[i]).abs()));
            s2_dev = dev.fold(s2_dev, f64::max);
        }
    }
    for x in s3.sample_points(20, 42) {
        let d = soliton_point(&s3, &x, Analytic).unwrap();
        for c in Chirality::BOTH {
            let p = eigen_profile(&d, c, 1e-9).unwrap();
            s3_dev = p.b.iter().fold(s3_dev, |m, b| m.max(b.abs()));
        }
    }
    outcome(s2_dev <= 1e-9 && s3_dev <= 1e-9, format!("s2xr2 deviation {s2_dev:.2e}, s3xr |b| {s3_dev:.2e}"))
}

fn half_weyl_anchors() -> Outcome {
    let (mut ratio, mut eig) = (0.0_f64, 0.0_f64);
    for id in [ModelId::S2xR2, ModelId::Cp2Point] {
        let m = make_model(id, 1.0).unwrap();
        for x in m.sample_points(10, 42) {
            let d = soliton_point(&m, &x, Analytic).unwrap();
            let r = d.cp.scalar();
            let w = HalfWeyl::of(&d.cp, Chirality::SelfDual);
            let inv = half_weyl_invariants(&w);
            ratio = ratio.max((inv.norm_sq / (r * r) - 1.0 / 24.0).abs());
            for (got, want) in inv.eigenvalues.iter().zip([r / 6.0, -r / 12.0, -r / 12.0]) {
                eig = eig.max((got - want).abs());
            }
        }
    }
    outcome(ratio <= 1e-12 && eig <= 1e-10, format!("|W⁺|²/R² − 1/24 {ratio:.2e}, eigenvalues {eig:.2e}"))
}

fn weitzenbock_closure() -> Outcome {
    let mut worst = 0.0_f64;
    let mut detail = Vec::new();
    for id in [ModelId::S2xR2, ModelId::Cp2Point] {
        let m = make_model(id, 1.0).unwrap();
        for (k, x) in m.sample_points(10, 42).into_iter().enumerate() {
            let d = soliton_point(&m, &x, Analytic).unwrap();
            let t = weitzenbock_terms(&d.cp, 1.0, Chirality::SelfDual);
            worst = worst.max(t.iter().sum::<f64>().abs());
            if k == 0 {
                detail.push(format!("{id}: {:.6} = {:.6} + {:.6}", t[0], -t[1], -t[2]));
            }
        }
    }
    let s2 = make_model(ModelId::S2xR2, 1.0).unwrap();
    let d = soliton_point(&s2, &[1.0, 0.3, 0.6, 0.8], Analytic).unwrap();
    let t = weitzenbock_terms(&d.cp, 1.0, Chirality::SelfDual);
    let split = [(t[0], 2.0 / 3.0), (-t[1], 1.0 / 3.0), (-t[2], 1.0 / 3.0)].iter().all(|(x, y)| (x - y).abs() <= 1e-10);
    outcome(worst <= 1e-10 && split, format!("residual {worst:.2e}; {}", detail.join("; ")))
}

fn symbolic_suite() -> Outcome {
    let start = Instant::now();
    let certs = symbolic_certificates();
    let t = RationalPoly::var(Var::T);
    let one = RationalPoly::int(1);
    let mut exact = true;
    for f in Family::BOTH {
        let spec = timofte_specialize(f).unwrap();
        exact &= spec == timofte_factored(f);
        let co = spec.coefficients_in(Var::K);
        let disc = co[1].pow(2) - RationalPoly::int(4) * &co[2] * &co[0];
        let lin = match f {
            Family::T11 => &t + RationalPoly::int(2),
            Family::TT1 => RationalPoly::int(2) * &t + &one,
        };
        exact &= disc == RationalPoly::int(-32) * lin.pow(2) * (&t - &one).pow(4) * (&t + &one).pow(2);
    }
    let (a2, a3, a4, r) = (Var::A2, Var::A3, Var::A4, RationalPoly::var(Var::R));
    let v = RationalPoly::var;
    let q23 = quotient_form(a2, a3, a4);
    let q24 = quotient_form(a2, a4, a3);
    let q34 = quotient_form(a3, a4, a2);
    let phi = halfweyl::certify::phi_poly();
    let (quot, rem) = (phi.derivative(a2) - phi.derivative(a3)).div_rem(&(v(a2) - v(a3)));
    exact &= rem.is_zero() && quot == q23;
    let k = RationalPoly::int(36) * &r;
    exact &= &q24 - &q23 == &k * (v(a4) - v(a3));
    exact &= &q34 - &q23 == &k * (v(a4) - v(a2));
    exact &= &q34 - &q24 == &k * (v(a3) - v(a2));
    let elapsed = start.elapsed();
    let certified = certs.as_ref().map(|c| c.len() == 4 && c.iter().all(|c| c.is_certified())).unwrap_or(false);
    outcome(
        exact && certified && within(elapsed, 1.0),
        format!("exact identities {exact}, certificates {certified}, {elapsed:.2?}"),
    )
}

fn sampling() -> Outcome {
    let start = Instant::now();
    let cert = sample_certify(1_000_000, 42, 100);
    let t = start.elapsed();
    let s = cert.sampling.as_ref().expect("sampling summary");
    let zeros = s.zero_weyl + s.zero_kahler;
    let ok = cert.is_certified() && s.is_clean() && s.samples == 1_000_000 && within(t, 60.0);
    outcome(
        ok,
        format!(
            "{} samples, {} negative, {} unclassified, {} zeros ({} Weyl, {} Kähler), {t:.2?}",
            s.samples, s.negative_count, s.unclassified_count, zeros, s.zero_weyl, s.zero_kahler
        ),
    )
}

fn cross_module() -> Outcome {
    let mut worst = 0.0_f64;
    let mut count = 0;
    for id in ModelId::ALL {
        let m = make_model(id, 1.0).unwrap();
        for x in m.sample_points(20, 42) {
            let d = soliton_point(&m, &x, Analytic).unwrap();
            for c in Chirality::BOTH {
                let p = if d.grad_f.norm() > GRADIENT_THRESHOLD {
                    eigen_profile(&d, c, 1e-9).unwrap()
                } else {
                    einstein_profile(&d, c)
                };
                let phi = phi_at_floats(p.scalar, p.a[1], p.a[2], p.a[3]).unwrap();
                worst = worst.max((PHI_SCALE as f64 * quartic_quantity(&p) - phi).abs());
                count += 1;
            }
        }
    }
    let one = rat(1, 1);
    let mut classes = classify_equality(&rat(4, 1), &-one.clone(), &one, &one).ok() == Some(EqualityClass::ZeroKahler);
    for c in [rat(1, 1), rat(-3, 1), rat(7, 2), rat(0, 1)] {
        for r in [rat(0, 1), rat(6, 1), rat(-5, 3), rat(1, 7)] {
            classes &= classify_equality(&r, &c, &c, &c).ok() == Some(EqualityClass::ZeroWeyl);
        }
    }
    outcome(
        worst <= 1e-12 && classes,
        format!("{count} profiles, max |6·quartic − φ| {worst:.2e}, classification {classes}"),
    )
}

fn determinism() -> Outcome {
    let verify = RunConfig::default();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let a = one.install(|| run_verify(&verify).unwrap().to_json());
    let b = three.install(|| run_verify(&verify).unwrap().to_json());
    let mut certify = RunConfig::default();
    certify.certifier.samples = 100_000;
    let c = one.install(|| run_certify(&certify).unwrap().to_json());
    let d = three.install(|| run_certify(&certify).unwrap().to_json());

    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_halfweyl");
    let files: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let path = dir.path().join(format!("r{i}.json"));
            let status = std::process::Command::new(bin)
                .args([
                    "verify", "--model", "s2xr2", "--model", "s3xr", "--lambda", "1", "--lambda", "2", "--points",
                    "20", "--report",
                ])
                .arg(&path)
                .env_remove(halfweyl_cli::REPORT_ENV)
                .stdout(std::process::Stdio::null())
                .status()
                .unwrap();
            assert!(status.success());
            std::fs::read(&path).unwrap()
        })
        .collect();
    let ok = a == b && c == d && files[0] == files[1];
    outcome(
        ok,
        format!("verify {} bytes, certify {} bytes, binary reports equal {}", a.len(), c.len(), files[0] == files[1]),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("soliton residual", soliton_residual_bound),
        ("soliton curvature identities", soliton_curvature_identities),
        ("D-tensor norm chain", d_tensor_norms),
        ("eigenframe profiles", eigen_profiles),
        ("half Weyl anchors", half_weyl_anchors),
        ("Weitzenböck closure", weitzenbock_closure),
        ("symbolic certificates", symbolic_suite),
        ("exact sampling", sampling),
        ("cross-module quartic", cross_module),
        ("report determinism", determinism),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr();
    for (n, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let mark = if o.pass { "PASS" } else { "FAIL" };
        writeln!(err, "criterion {:>2} {mark} {name}: {}", n + 1, o.detail).unwrap();
        if !o.pass {
            failed.push(n + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
