use std::time::Instant;

use halfweyl::certify::{
    a1_zero_certify, classify_equality, critical_point_certify, discriminant_certify, phi_eval, phi_from_invariants,
    phi_poly, printed_partial, printed_quotient, q_sextic, quotient_form, rat, rationalize, sample_certify,
    sturm_nonneg, symbolic_certificates, timofte_factored, timofte_specialize, Domain, EqualityClass, Family,
    RationalPoly, Var, I128_SAFE, PHI_SCALE, RATIONALIZE_CAP,
};
use halfweyl::geometry::{make_model, soliton_point, DerivativeScheme, ModelId, GRADIENT_THRESHOLD};
use halfweyl::soliton::{eigen_profile, einstein_profile, quartic_quantity};
use halfweyl::{Chirality, EigenProfile};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn symbolic_suite_certifies_quickly() {
    let start = Instant::now();
    let certs = symbolic_certificates().unwrap();
    let elapsed = start.elapsed();
    assert_eq!(certs.len(), 4);
    for c in &certs {
        assert!(c.is_certified(), "{}: {:?}", c.name, c.verdict);
        for s in &c.steps {
            assert_eq!(s.lhs_hash, s.rhs_hash, "{}: {}", c.name, s.claim);
        }
    }
    assert!(elapsed.as_secs_f64() < 1.0, "{elapsed:?}");
}

#[test]
fn discriminants_match_published_forms() {
    let t = RationalPoly::var(Var::T);
    let one = RationalPoly::int(1);
    for f in Family::BOTH {
        let spec = timofte_specialize(f).unwrap();
        assert_eq!(spec, timofte_factored(f));
        let co = spec.coefficients_in(Var::K);
        let disc = co[1].pow(2) - RationalPoly::int(4) * &co[2] * &co[0];
        let lin = match f {
            Family::T11 => &t + RationalPoly::int(2),
            Family::TT1 => RationalPoly::int(2) * &t + &one,
        };
        let expected = RationalPoly::int(-32) * lin.pow(2) * (&t - &one).pow(4) * (&t + &one).pow(2);
        assert_eq!(disc, expected, "{f:?}");
        let cert = discriminant_certify(f).unwrap();
        assert!(cert.is_certified());
    }
}

#[test]
fn tt1_zero_sits_at_negative_r() {
    let cert = discriminant_certify(Family::TT1).unwrap();
    assert!(cert.steps.iter().any(|s| s.conclusion.contains("k* = 4/1, i.e. R = -4/1")), "{:#?}", cert.steps);
    let cert = discriminant_certify(Family::T11).unwrap();
    assert!(cert.steps.iter().any(|s| s.conclusion.contains("k* = 4/1, i.e. R = 4/1")));
}

#[test]
fn a1_branch_sextic_has_the_three_double_roots() {
    let cert = a1_zero_certify().unwrap();
    assert!(cert.is_certified());
    let mut exact: Vec<BigRational> =
        cert.roots.iter().map(|r| r.exact.clone().expect("dyadic roots are hit exactly")).collect();
    exact.sort();
    assert_eq!(exact, vec![rat(-2, 1), rat(-1, 2), rat(1, 1)]);
    assert!(cert.roots.iter().all(|r| r.multiplicity == 2));

    let q1 = q_sextic().substitute_value(Var::A3, &rat(1, 1)).to_univariate(Var::A2).unwrap();
    let report = sturm_nonneg(&q1, &Domain::Real).unwrap();
    assert!(report.nonnegative);
}

#[test]
fn a1_branch_discriminant_is_nonpositive_on_random_rationals() {
    let restricted = phi_poly().substitute(Var::A4, &-(RationalPoly::var(Var::A2) + RationalPoly::var(Var::A3)));
    let co = restricted.coefficients_in(Var::R);
    let disc = co[1].pow(2) - RationalPoly::int(4) * &co[2] * &co[0];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100_000 {
        let x = rat(rng.random_range(-1000..=1000), rng.random_range(1..=1000));
        let y = rat(rng.random_range(-1000..=1000), rng.random_range(1..=1000));
        let d = disc.eval(&[(Var::A2, x.clone()), (Var::A3, y.clone())]).unwrap();
        assert!(!d.is_positive(), "{x} {y}");
        if d.is_zero() {
            assert!(x.is_zero() && y.is_zero());
        }
    }
}

#[test]
fn critical_point_quotient_differences() {
    let cert = critical_point_certify().unwrap();
    assert!(cert.is_certified());
    let diffs: Vec<_> = cert.steps.iter().filter(|s| s.claim.contains("36R")).collect();
    assert_eq!(diffs.len(), 3);
    // (φ_a2 − φ_a3)/(a2 − a3) against both the exact and the printed quadratic
    let phi = phi_poly();
    let (a2, a3, a4, r) =
        (RationalPoly::var(Var::A2), RationalPoly::var(Var::A3), RationalPoly::var(Var::A4), RationalPoly::var(Var::R));
    let (q, rem) = (phi.derivative(Var::A2) - phi.derivative(Var::A3)).div_rem(&(&a2 - &a3));
    assert!(rem.is_zero());
    assert_eq!(q, quotient_form(Var::A2, Var::A3, Var::A4));
    let printed = printed_quotient(Var::A2, Var::A3, Var::A4);
    assert_eq!(&q - &printed, RationalPoly::int(8) * &r * (&a2 + &a3) - RationalPoly::int(64) * &r * &a4);
    let q24 = quotient_form(Var::A2, Var::A4, Var::A3);
    assert_eq!(q24 - &q, RationalPoly::int(36) * &r * (&a4 - &a3));
    for x in [Var::A2, Var::A3, Var::A4] {
        assert_eq!(phi.derivative(x), printed_partial(x));
    }
}

#[test]
fn phi_overflow_bound_covers_coefficients() {
    let total: BigRational = phi_poly().terms().map(|(_, c)| c.abs()).sum();
    assert!(total <= rat(342, 1), "{total}");
    assert!(phi_poly().is_homogeneous(4));
    assert_eq!(I128_SAFE, 1 << 29);
}

#[test]
fn sampling_equality_examples() {
    for c in [rat(1, 1), rat(-3, 1), rat(7, 2)] {
        for r in [rat(0, 1), rat(6, 1), rat(-5, 3)] {
            assert_eq!(classify_equality(&r, &c, &c, &c).unwrap(), EqualityClass::ZeroWeyl);
        }
    }
    for a in [rat(1, 1), rat(2, 1), rat(7, 3)] {
        let r = rat(4, 1) * &a;
        assert_eq!(classify_equality(&r, &-a.clone(), &a, &a).unwrap(), EqualityClass::ZeroKahler);
        assert_eq!(classify_equality(&r, &a, &-a.clone(), &a).unwrap(), EqualityClass::ZeroKahler);
    }
    let cert = sample_certify(50_000, 42, 100);
    assert!(cert.is_certified());
    let s = cert.sampling.unwrap();
    assert!(s.is_clean());
    assert!(s.generic_zeros.is_empty());
}

fn catalog_profiles() -> Vec<EigenProfile> {
    let mut out = Vec::new();
    for id in ModelId::ALL {
        let m = make_model(id, 1.0).unwrap();
        for x in m.sample_points(20, 17) {
            let d = soliton_point(&m, &x, DerivativeScheme::Analytic).unwrap();
            for c in Chirality::BOTH {
                let p = if d.grad_f.norm() > GRADIENT_THRESHOLD {
                    eigen_profile(&d, c, 1e-9).unwrap()
                } else {
                    einstein_profile(&d, c)
                };
                out.push(p);
            }
        }
    }
    out
}

#[test]
fn tensor_quantity_matches_exact_quartic_on_catalog() {
    let profiles = catalog_profiles();
    assert!(profiles.len() >= 200);
    for p in profiles {
        let q = |x: f64| rationalize(x, RATIONALIZE_CAP).unwrap();
        let exact = phi_eval(&q(p.scalar), &q(p.a[1]), &q(p.a[2]), &q(p.a[3])).to_f64().unwrap();
        let float = PHI_SCALE as f64 * quartic_quantity(&p);
        assert!((exact - float).abs() <= 1e-12, "{p:?}: {exact} vs {float}");
    }
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-60i64..=60, 1i64..=60).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn classification_never_fails(r in small_rational(), a2 in small_rational(), a3 in small_rational(), a4 in small_rational()) {
        prop_assert!(classify_equality(&r, &a2, &a3, &a4).is_ok());
    }

    #[test]
    fn phi_is_symmetric_and_homogeneous(r in small_rational(), a in proptest::array::uniform3(small_rational()), s in small_rational()) {
        let v = phi_eval(&r, &a[0], &a[1], &a[2]);
        prop_assert_eq!(&v, &phi_eval(&r, &a[2], &a[0], &a[1]));
        prop_assert_eq!(&v, &phi_eval(&r, &a[1], &a[0], &a[2]));
        let scaled = phi_eval(&(&s * &r), &(&s * &a[0]), &(&s * &a[1]), &(&s * &a[2]));
        prop_assert_eq!(scaled, num_traits::pow(s.clone(), 4) * v);
    }

    #[test]
    fn float_profile_agrees_with_exact_quartic(a in proptest::array::uniform3(-2.0..2.0f64), r in -3.0..6.0f64) {
        let a1 = -(a[0] + a[1] + a[2]);
        let aa = [a1, a[0], a[1], a[2]];
        let p = EigenProfile { a: aa, b: EigenProfile::predicted_b(&aa), scalar: r, grad_f_norm: 1.0 };
        let q = |x: f64| rationalize(x, RATIONALIZE_CAP).unwrap();
        let exact = phi_eval(&q(r), &q(a[0]), &q(a[1]), &q(a[2])).to_f64().unwrap();
        let float = PHI_SCALE as f64 * quartic_quantity(&p);
        prop_assert!((exact - float).abs() <= 1e-9 * exact.abs().max(1.0), "{} vs {}", exact, float);
    }
}

#[test]
fn exact_quartic_equals_eigenframe_expression() {
    assert_eq!(phi_poly(), &phi_from_invariants());
}
