use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::certificate::{Certificate, Step};
use super::phi::{classify_equality, invariant_forms, p_form, phi_from_invariants, phi_poly, s_form, EqualityClass};
use super::poly::{rat, rational_string, RationalPoly, Var};
use super::univariate::{sturm_nonneg, Domain, SturmReport, UniPoly};
use super::CertifyError;

fn v(x: Var) -> RationalPoly {
    RationalPoly::var(x)
}

fn c(n: i64) -> RationalPoly {
    RationalPoly::int(n)
}

/// The two one-parameter test families of the half-degree principle for a
/// symmetric quartic in three variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `(a2, a3, a4) = (t, 1, 1)`, `R = k(t + 2)`.
    T11,
    /// `(a2, a3, a4) = (t, t, 1)`, `R = k(2t + 1)`.
    TT1,
}

impl Family {
    pub const BOTH: [Family; 2] = [Family::T11, Family::TT1];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::T11 => "t11",
            Family::TT1 => "tt1",
        }
    }

    fn label(self) -> &'static str {
        match self {
            Family::T11 => "φ(t,1,1)",
            Family::TT1 => "φ(t,t,1)",
        }
    }

    fn entries(self) -> [RationalPoly; 3] {
        let t = v(Var::T);
        match self {
            Family::T11 => [t, c(1), c(1)],
            Family::TT1 => [t.clone(), t, c(1)],
        }
    }

    /// `a2 + a3 + a4` on the family, so that `R = k · sum`.
    fn sum(self) -> RationalPoly {
        let t = v(Var::T);
        match self {
            Family::T11 => t + c(2),
            Family::TT1 => c(2) * t + c(1),
        }
    }

    /// Root of [`Family::sum`]: where the leading coefficient in `k` degenerates.
    fn degenerate(self) -> BigRational {
        match self {
            Family::T11 => rat(-2, 1),
            Family::TT1 => rat(-1, 2),
        }
    }
}

fn specialize(f: Family) -> RationalPoly {
    let [x, y, z] = f.entries();
    phi_poly()
        .substitute(Var::R, &(v(Var::K) * f.sum()))
        .substitute(Var::A2, &x)
        .substitute(Var::A3, &y)
        .substitute(Var::A4, &z)
}

/// The published factorizations of the two specializations.
pub fn timofte_factored(f: Family) -> RationalPoly {
    let (t, k) = (v(Var::T), v(Var::K));
    let sq = (&t - c(1)).pow(2);
    let bracket = match f {
        Family::T11 => k.pow(2) * (&t + c(2)).pow(2) - c(8) * &k * (&t + c(2)) + c(8) * (t.pow(2) + c(2) * &t + c(3)),
        Family::TT1 => {
            let s = c(2) * &t + c(1);
            k.pow(2) * s.pow(2) - c(8) * &k * &t * &s + c(8) * (c(3) * t.pow(2) + c(2) * &t + c(1))
        }
    };
    sq * bracket
}

/// `φ` on a test family, in `(t, k)`. Fails hard if it differs from the
/// published factorization.
pub fn timofte_specialize(f: Family) -> Result<RationalPoly, CertifyError> {
    let spec = specialize(f);
    Step::identity(format!("{} factored form", f.label()), &spec, &timofte_factored(f), "")?;
    Ok(spec)
}

fn domain_text(d: &Domain) -> String {
    match d {
        Domain::Real => "ℝ".into(),
        Domain::Interval(lo, hi) => format!("[{}, {}]", rational_string(lo), rational_string(hi)),
    }
}

fn roots_text(r: &SturmReport) -> String {
    if r.roots.is_empty() {
        return "no real roots".into();
    }
    let parts: Vec<String> = r
        .roots
        .iter()
        .map(|x| match &x.exact {
            Some(e) => format!("{} (multiplicity {})", rational_string(e), x.multiplicity),
            None => {
                let mid = ((&x.lo + &x.hi) / rat(2, 1)).to_f64().unwrap_or(f64::NAN);
                format!("≈{mid:.9} (multiplicity {})", x.multiplicity)
            }
        })
        .collect();
    format!("roots {}", parts.join(", "))
}

/// Sturm decision for a univariate `p`. The step's identity is `p` against
/// its rebuilt square-free factorization.
fn sturm_step(claim: &str, p: &RationalPoly, x: Var, domain: &Domain) -> Result<(Step, SturmReport), CertifyError> {
    let u = p.to_univariate(x).ok_or_else(|| CertifyError::IdentityMismatch {
        step: claim.into(),
        difference: format!("not univariate in {}", x.name()),
    })?;
    let report = sturm_nonneg(&u, domain)?;
    let (lead, factors) = u.square_free_factors();
    let mut rebuilt = UniPoly::new(vec![lead]);
    for (f, m) in &factors {
        for _ in 0..*m {
            rebuilt = rebuilt.mul(f);
        }
    }
    let verdict = if report.nonnegative { "≥ 0" } else { "takes negative values" };
    let conclusion = format!("{verdict} on {}; {}", domain_text(domain), roots_text(&report));
    let step = Step::identity(claim, p, &RationalPoly::from_univariate(&rebuilt, x), conclusion)?;
    Ok((step, report))
}

fn check_sturm(cert: &mut Certificate, var: Var, r: (Step, SturmReport)) {
    cert.steps.push(r.0);
    if let Some(w) = r.1.witness {
        cert.refute(vec![format!("{}={}", var.name(), rational_string(&w))], "negative".into());
    }
}

/// Steps shared by the symbolic certificates: the expansion of `φ` from the
/// eigenframe invariants, symmetry, and homogeneity.
fn expansion_steps(cert: &mut Certificate) -> Result<(), CertifyError> {
    let phi = phi_poly();
    let (x, y, z) = (v(Var::A2), v(Var::A3), v(Var::A4));
    let [w2, det, ric2, pair] = invariant_forms();
    cert.push(Step::identity(
        "φ = 6(R²|W±|² − 36R det W± + 4|W±|²|R̊c|² − R⟨(R̊c∘R̊c)±, W±⟩) with bᵢ = −(a1 + 3aᵢ)/12",
        phi,
        &phi_from_invariants(),
        "the expanded quartic is the eigenframe expression scaled by 6",
    ))?;
    cert.push(Step::identity("|R̊c|² = 2(Σa² + Σaᵢaⱼ)", &ric2, &(c(2) * s_form()), "closed form"))?;
    cert.push(Step::identity("|W±|² = (Σa² − Σaᵢaⱼ)/6", &w2, &p_form().scale(&rat(1, 6)), "closed form"))?;
    let cubic = (&y + &z - c(2) * &x) * (&x + &z - c(2) * &y) * (&x + &y - c(2) * &z);
    cert.push(Step::identity(
        "36 det W± = (a3 + a4 − 2a2)(a2 + a4 − 2a3)(a2 + a3 − 2a4)/6",
        &(c(36) * det),
        &cubic.scale(&rat(1, 6)),
        "closed form",
    ))?;
    let pair_form =
        c(2) * (x.pow(3) + y.pow(3) + z.pow(3)) + x.pow(2) * (&y + &z) + y.pow(2) * (&x + &z) + z.pow(2) * (&x + &y)
            - c(12) * &x * &y * &z;
    cert.push(Step::identity(
        "⟨(R̊c∘R̊c)±, W±⟩ = (2Σa³ + Σ_{i≠j} aᵢ²aⱼ − 12a2a3a4)/6",
        &pair,
        &pair_form.scale(&rat(1, 6)),
        "closed form",
    ))?;
    for (p, q) in [(Var::A2, Var::A3), (Var::A3, Var::A4)] {
        cert.push(Step::identity(
            format!("φ is invariant under {} ↔ {}", p.name(), q.name()),
            &phi.swap_vars(p, q),
            phi,
            "two transpositions generate every permutation of (a2, a3, a4)",
        ))?;
    }
    for s in [rat(2, 1), rat(-3, 1), rat(1, 5)] {
        let scaled = Var::ALL[..4].iter().fold(phi.clone(), |acc, &x| acc.substitute(x, &v(x).scale(&s)));
        cert.push(Step::identity(
            format!("φ(sR, sa) = s⁴φ(R, a) at s = {}", rational_string(&s)),
            &scaled,
            &phi.scale(&num_traits::pow(s.clone(), 4)),
            "homogeneous of degree 4",
        ))?;
    }
    Ok(())
}

/// Nonnegativity of `φ` on one test family for `t ∈ [−1, 1]` and every `k`,
/// through the discriminant of the quadratic in `k`.
pub fn discriminant_certify(f: Family) -> Result<Certificate, CertifyError> {
    let name = format!("timofte_{}", f.as_str());
    let zero_r = match f {
        Family::T11 => 4,
        Family::TT1 => -4,
    };
    let claim = format!(
        "{} ≥ 0 for t ∈ [−1, 1] and every k, vanishing only at t = 1 or at t = −1 with R = {zero_r}",
        f.label()
    );
    let mut cert = Certificate::new(&name, &claim);
    expansion_steps(&mut cert)?;

    let (t, k) = (v(Var::T), v(Var::K));
    let spec = timofte_specialize(f)?;
    cert.push(Step::identity(
        format!("{} with R = k(a2 + a3 + a4) equals the published factorization", f.label()),
        &spec,
        &timofte_factored(f),
        "exact",
    ))?;
    let sq = (&t - c(1)).pow(2);
    let (quot, rem) = spec.div_rem(&sq);
    cert.push(Step::identity(
        format!("{} is divisible by (t − 1)²", f.label()),
        &rem,
        &RationalPoly::zero(),
        "zero remainder; the quotient is a quadratic in k",
    ))?;
    cert.push(Step::identity("quotient by (t − 1)²", &(&quot * &sq), &spec, "exact"))?;

    let co = spec.coefficients_in(Var::K);
    if co.len() != 3 {
        return Err(CertifyError::IdentityMismatch { step: name, difference: format!("degree {} in k", co.len() - 1) });
    }
    let (cc, bb, aa) = (&co[0], &co[1], &co[2]);
    cert.push(Step::identity(
        "coefficient split in k",
        &(aa * k.pow(2) + bb * &k + cc),
        &spec,
        "A k² + B k + C with A, B, C polynomials in t",
    ))?;
    let sum = f.sum();
    let lead_root = (&t - c(1)) * &sum;
    cert.push(Step::identity(
        "A is a square",
        aa,
        &lead_root.pow(2),
        format!("A ≥ 0, vanishing only at t = 1 and t = {}", rational_string(&f.degenerate())),
    ))?;
    let disc = bb.pow(2) - c(4) * aa * cc;
    let published = c(-32) * sum.pow(2) * (&t - c(1)).pow(4) * (&t + c(1)).pow(2);
    cert.push(Step::identity("𝔇 = B² − 4AC equals the published form", &disc, &published, "exact"))?;
    let h = &sum * (&t - c(1)).pow(2) * (&t + c(1));
    cert.push(Step::identity(
        "−𝔇 = 32 h² with h = (a2 + a3 + a4)(t − 1)²(t + 1)",
        &-disc.clone(),
        &(c(32) * h.pow(2)),
        format!("𝔇 ≤ 0, vanishing only at t ∈ {{1, −1, {}}}", rational_string(&f.degenerate())),
    ))?;
    let unit = Domain::Interval(rat(-1, 1), rat(1, 1));
    check_sturm(&mut cert, Var::T, sturm_step("A on [−1, 1] by Sturm", aa, Var::T, &unit)?);
    check_sturm(&mut cert, Var::T, sturm_step("−𝔇 on [−1, 1] by Sturm", &-disc, Var::T, &unit)?);

    cert.push(Step::identity(
        format!("{} at t = 1", f.label()),
        &spec.substitute_value(Var::T, &rat(1, 1)),
        &RationalPoly::zero(),
        "vanishes for every k: the point has a2 = a3 = a4",
    ))?;
    let deg = f.degenerate();
    let at_deg = spec.substitute_value(Var::T, &deg);
    let value = at_deg.eval(&[]).unwrap_or_default();
    let deg_conclusion = match f {
        Family::T11 => format!("constant {} > 0; t = −2 lies outside [−1, 1] in any case", rational_string(&value)),
        Family::TT1 => format!(
            "constant {}; here a2 + a3 + a4 = 0 forces R = 0, and the whole a1 = 0 hyperplane is settled by the a1_zero_branch certificate",
            rational_string(&value)
        ),
    };
    cert.push(Step::identity(
        format!("{} at the degenerate locus t = {}", f.label(), rational_string(&deg)),
        &at_deg,
        &RationalPoly::constant(value.clone()),
        deg_conclusion,
    ))?;
    if !value.is_positive() {
        cert.refute(vec![format!("t={}", rational_string(&deg))], rational_string(&value));
    }

    // t = −1: the quadratic in k has a double root
    let m1 = rat(-1, 1);
    let a_m = aa.substitute_value(Var::T, &m1).eval(&[]).unwrap_or_default();
    let b_m = bb.substitute_value(Var::T, &m1).eval(&[]).unwrap_or_default();
    let k_star = -b_m / (rat(2, 1) * &a_m);
    let r_star = sum.substitute_value(Var::T, &m1).eval(&[]).unwrap_or_default() * &k_star;
    cert.push(Step::identity(
        format!("{} at t = −1 is A(−1)(k − k*)²", f.label()),
        &spec.substitute_value(Var::T, &m1),
        &(k.clone() - RationalPoly::constant(k_star.clone())).pow(2).scale(&a_m),
        format!("zero only at k* = {}, i.e. R = {}", rational_string(&k_star), rational_string(&r_star)),
    ))?;
    let [x, y, z] = f.entries().map(|e| e.substitute_value(Var::T, &m1).eval(&[]).unwrap_or_default());
    let class = classify_equality(&r_star, &x, &y, &z)?;
    cert.notes.push(format!(
        "the zero (R; a2, a3, a4) = ({}; {}, {}, {}) classifies as {:?}",
        rational_string(&r_star),
        rational_string(&x),
        rational_string(&y),
        rational_string(&z),
        class
    ));
    if class != EqualityClass::ZeroKahler {
        cert.refute(vec![rational_string(&r_star)], "zero outside the Kähler pattern".into());
    }
    if f == Family::TT1 {
        let alt = spec.eval(&[(Var::T, m1.clone()), (Var::K, rat(-4, 1))]).unwrap_or_default();
        cert.notes.push(format!(
            "reading k = −4 instead (R = 4 at a = (−1, −1, 1)) gives φ = {}, not a zero; the polynomial's zero has k = 4 and R = −4",
            rational_string(&alt)
        ));
    }
    cert.notes
        .push("for t ∈ [−1, 1] off the degenerate loci, A > 0 and 𝔇 ≤ 0, so the quadratic in k is nonnegative".into());
    cert.notes.push("two families cover the n − 1 = 2 cases of the half-degree principle for three variables".into());
    Ok(cert)
}

/// `q(a, b) = (a² + b² + (a + b)²)³ − 54a²b²(a + b)²` in `(a2, a3)`.
pub fn q_sextic() -> RationalPoly {
    let (x, y) = (v(Var::A2), v(Var::A3));
    let s = x.pow(2) + y.pow(2) + (&x + &y).pow(2);
    s.pow(3) - c(54) * (&x * &y * (&x + &y)).pow(2)
}

/// Positivity of `φ` on the hyperplane `a2 + a3 + a4 = 0` (that is, `a1 = 0`).
pub fn a1_zero_certify() -> Result<Certificate, CertifyError> {
    let mut cert = Certificate::new(
        "a1_zero_branch",
        "on a2 + a3 + a4 = 0, φ ≥ 0 for every R, vanishing only at a2 = a3 = a4 = 0",
    );
    let (r, x, y) = (v(Var::R), v(Var::A2), v(Var::A3));
    let restricted = phi_poly().substitute(Var::A4, &-(&x + &y));
    let m = x.pow(2) + y.pow(2) + &x * &y;
    let p = &x * &y * (&x + &y);
    let s = x.pow(2) + y.pow(2) + (&x + &y).pow(2);
    let quoted = c(3) * r.pow(2) * &m - c(36) * &r * &p + c(24) * m.pow(2);
    cert.push(Step::identity(
        "φ with a4 = −a2 − a3",
        &restricted,
        &quoted,
        "3R²m − 36Rp + 24m² with m = a2² + a3² + a2a3, p = a2a3(a2 + a3)",
    ))?;
    let co = restricted.coefficients_in(Var::R);
    let disc = co[1].pow(2) - c(4) * &co[2] * &co[0];
    cert.push(Step::identity(
        "𝔇 = B² − 4AC in R equals 36²p² − 36S³, S = a2² + a3² + (a2 + a3)²",
        &disc,
        &(c(1296) * p.pow(2) - c(36) * s.pow(3)),
        "exact",
    ))?;
    let q = q_sextic();
    cert.push(Step::identity("𝔇 = −24q − 12S³", &disc, &(c(-24) * &q - c(12) * s.pow(3)), "q ≥ 0 gives 𝔇 ≤ −12S³"))?;
    cert.push(Step::identity("2m = S", &(c(2) * &m), &s, "leading coefficient 3m ≥ 0, zero only at a2 = a3 = 0"))?;
    let q1 = q.substitute_value(Var::A3, &rat(1, 1));
    cert.push(Step::identity(
        "q(a·b, b) = b⁶ q(a, 1)",
        &q.substitute(Var::A2, &(&x * &y)),
        &(y.pow(6) * &q1),
        "homogeneous of degree 6: b ≠ 0 reduces to b = 1",
    ))?;
    let cube = (&x - c(1)) * (&x + c(2)) * (c(2) * &x + c(1));
    cert.push(Step::identity("q(a, 1) = 2[(a − 1)(a + 2)(2a + 1)]²", &q1, &(c(2) * cube.pow(2)), "a perfect square"))?;
    let sturm = sturm_step("q(a, 1) on ℝ by Sturm", &q1, Var::A2, &Domain::Real)?;
    cert.roots = sturm.1.roots.clone();
    check_sturm(&mut cert, Var::A2, sturm);
    cert.push(Step::identity(
        "q(a, 0) = 8a⁶",
        &q.substitute_value(Var::A3, &rat(0, 1)),
        &(c(8) * x.pow(6)),
        "the b = 0 ray is nonnegative",
    ))?;
    cert.push(Step::identity(
        "φ at a2 = a3 = a4 = 0",
        &restricted.substitute_value(Var::A2, &rat(0, 1)).substitute_value(Var::A3, &rat(0, 1)),
        &RationalPoly::zero(),
        "vanishes for every R",
    ))?;
    cert.notes.push(
        "q = 0 exactly when a2 = a3, a2 = −2a3 or a3 = −2a2 (one entry is −2 times another); there 𝔇 = −12S³ is still negative unless S = 0".into(),
    );
    cert.notes.push("𝔇 ≤ −12S³ < 0 together with 3m > 0 gives φ > 0 whenever (a2, a3) ≠ 0".into());
    Ok(cert)
}

/// The published partial derivative `∂φ/∂x`, transcribed term by term.
pub fn printed_partial(x: Var) -> RationalPoly {
    let (r, a2, a3, a4) = (v(Var::R), v(Var::A2), v(Var::A3), v(Var::A4));
    let r2 = r.pow(2);
    match x {
        Var::A2 => {
            &r2 * (c(2) * &a2 - &a3 - &a4)
                - c(4) * &r * (c(2) * &a2 * &a3 + c(2) * &a2 * &a4 + a3.pow(2) + a4.pow(2) - c(6) * &a3 * &a4)
                + c(16)
                    * (c(2) * a2.pow(3) + &a2 * a3.pow(2) + &a2 * a4.pow(2)
                        - a3.pow(2) * &a4
                        - &a3 * a4.pow(2)
                        - c(2) * &a2 * &a3 * &a4)
        }
        Var::A3 => {
            &r2 * (c(2) * &a3 - &a2 - &a4)
                - c(4) * &r * (c(2) * &a2 * &a3 + c(2) * &a3 * &a4 + a2.pow(2) + a4.pow(2) - c(6) * &a2 * &a4)
                + c(16)
                    * (c(2) * a3.pow(3) + a2.pow(2) * &a3 + &a3 * a4.pow(2)
                        - a2.pow(2) * &a4
                        - &a2 * a4.pow(2)
                        - c(2) * &a2 * &a3 * &a4)
        }
        Var::A4 => {
            &r2 * (c(2) * &a4 - &a2 - &a3)
                - c(4) * &r * (c(2) * &a2 * &a4 + c(2) * &a3 * &a4 + a2.pow(2) + a3.pow(2) - c(6) * &a2 * &a3)
                + c(16)
                    * (c(2) * a4.pow(3) + a2.pow(2) * &a4 + a3.pow(2) * &a4
                        - a2.pow(2) * &a3
                        - &a2 * a3.pow(2)
                        - c(2) * &a2 * &a3 * &a4)
        }
        _ => RationalPoly::zero(),
    }
}

/// The quotient `(φ_i − φ_j)/(a_i − a_j)` as printed; `other` is the third index.
pub fn printed_quotient(i: Var, j: Var, other: Var) -> RationalPoly {
    let r = v(Var::R);
    c(3) * r.pow(2) - &r * quotient_linear(i, j, other) + c(16) * quotient_quadratic()
}

/// The exact quotient: the printed form with the sign of its `R`-linear term
/// reversed.
pub fn quotient_form(i: Var, j: Var, other: Var) -> RationalPoly {
    let r = v(Var::R);
    c(3) * r.pow(2) + &r * quotient_linear(i, j, other) + c(16) * quotient_quadratic()
}

fn quotient_linear(i: Var, j: Var, other: Var) -> RationalPoly {
    c(4) * (v(i) + v(j)) - c(32) * v(other)
}

fn quotient_quadratic() -> RationalPoly {
    let (a2, a3, a4) = (v(Var::A2), v(Var::A3), v(Var::A4));
    c(2) * (a2.pow(2) + a3.pow(2) + a4.pow(2)) + &a2 * &a3 + &a2 * &a4 + &a3 * &a4
}

/// No zero of `φ` has pairwise distinct `a2, a3, a4`.
pub fn critical_point_certify() -> Result<Certificate, CertifyError> {
    let mut cert = Certificate::new(
        "critical_points",
        "φ has no zero with a2, a3, a4 pairwise distinct: its a-gradient cannot vanish there",
    );
    let phi = phi_poly();
    let vars = [Var::A2, Var::A3, Var::A4];
    let grads: Vec<RationalPoly> = vars.iter().map(|&x| phi.derivative(x)).collect();
    for (x, g) in vars.iter().zip(&grads) {
        cert.push(Step::identity(
            format!("∂φ/∂{} matches the published expression", x.name()),
            g,
            &printed_partial(*x),
            "exact",
        ))?;
    }
    let mut quotients = Vec::new();
    for (i, j, o) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let (vi, vj, vo) = (vars[i], vars[j], vars[o]);
        let claim = format!("(φ_{0} − φ_{1})/({0} − {1})", vi.name(), vj.name());
        let (quot, rem) = (&grads[i] - &grads[j]).div_rem(&(v(vi) - v(vj)));
        cert.push(Step::identity(format!("{claim} divides exactly"), &rem, &RationalPoly::zero(), "zero remainder"))?;
        cert.push(Step::identity(
            format!("{claim} = 3R² + R(4({0} + {1}) − 32{2}) + 16(2Σa² + Σaᵢaⱼ)", vi.name(), vj.name(), vo.name()),
            &quot,
            &quotient_form(vi, vj, vo),
            "exact",
        ))?;
        cert.push(Step::identity(
            format!("{claim} minus the printed quadratic"),
            &(&quot - printed_quotient(vi, vj, vo)),
            &(c(2) * v(Var::R) * quotient_linear(vi, vj, vo)),
            "the printed R-linear term has the opposite sign; nothing downstream depends on it",
        ))?;
        quotients.push(quot);
    }
    let r = v(Var::R);
    let (a2, a3, a4) = (v(Var::A2), v(Var::A3), v(Var::A4));
    let names = ["Q(a2,a3)", "Q(a2,a4)", "Q(a3,a4)"];
    for (hi, lo, rhs) in
        [(1, 0, c(36) * &r * (&a4 - &a3)), (2, 0, c(36) * &r * (&a4 - &a2)), (2, 1, c(36) * &r * (&a3 - &a2))]
    {
        cert.push(Step::identity(
            format!("{} − {} = 36R·(difference of two entries)", names[hi], names[lo]),
            &(&quotients[hi] - &quotients[lo]),
            &rhs,
            "with R ≠ 0 and all quotients zero, two entries coincide",
        ))?;
    }
    let sos = c(16) * (a2.pow(2) + a3.pow(2) + a4.pow(2))
        + c(8) * ((&a2 + &a3).pow(2) + (&a2 + &a4).pow(2) + (&a3 + &a4).pow(2));
    cert.push(Step::identity(
        "Q(a2,a3) at R = 0 is 16Σa² + 8Σ(aᵢ + aⱼ)²",
        &quotients[0].substitute_value(Var::R, &BigRational::zero()),
        &sos,
        "positive unless a = 0, so R = 0 admits no such critical zero either",
    ))?;
    let diag = |p: &RationalPoly| p.substitute(Var::A3, &a2).substitute(Var::A4, &a2);
    cert.push(Step::identity(
        "Q(a2,a3) agrees with Q(a3,a4) on a2 = a3 = a4",
        &diag(&quotients[0]),
        &diag(&quotients[2]),
        "consistent division",
    ))?;
    cert.push(Step::identity(
        "Q(a2,a4) agrees with Q(a2,a3) on a2 = a3 = a4",
        &diag(&quotients[1]),
        &diag(&quotients[0]),
        "consistent division",
    ))?;
    cert.notes.push(
        "a zero of φ ≥ 0 is a minimum, so its a-gradient vanishes; distinct entries force those differences to be zero"
            .into(),
    );
    cert.notes.push(
        "points with exactly two equal entries reduce by symmetry and homogeneity to the two test families, whose zeros are settled there".into(),
    );
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specializations_hit_the_quoted_zeros() {
        let t11 = timofte_specialize(Family::T11).unwrap();
        for kk in [rat(0, 1), rat(3, 1), rat(-7, 2)] {
            assert!(t11.eval(&[(Var::T, rat(1, 1)), (Var::K, kk)]).unwrap().is_zero());
        }
        assert!(t11.eval(&[(Var::T, rat(-1, 1)), (Var::K, rat(4, 1))]).unwrap().is_zero());
        let tt1 = timofte_specialize(Family::TT1).unwrap();
        assert!(tt1.eval(&[(Var::T, rat(-1, 1)), (Var::K, rat(4, 1))]).unwrap().is_zero());
        assert_eq!(tt1.eval(&[(Var::T, rat(-1, 1)), (Var::K, rat(-4, 1))]).unwrap(), rat(256, 1));
    }

    #[test]
    fn t11_discriminant_at_one_half() {
        let spec = timofte_specialize(Family::T11).unwrap();
        let co = spec.coefficients_in(Var::K);
        let d = co[1].pow(2) - RationalPoly::int(4) * &co[2] * &co[0];
        assert_eq!(d.eval(&[(Var::T, rat(1, 2))]).unwrap(), rat(-225, 8));
    }

    #[test]
    fn partial_at_unit_vector() {
        let g = printed_partial(Var::A2);
        let z = rat(0, 1);
        assert_eq!(
            g.eval(&[(Var::R, z.clone()), (Var::A2, rat(1, 1)), (Var::A3, z.clone()), (Var::A4, z)]).unwrap(),
            rat(32, 1)
        );
    }

    #[test]
    fn sextic_vanishes_at_equality_case() {
        let q1 = q_sextic().substitute_value(Var::A3, &rat(1, 1));
        assert!(q1.eval(&[(Var::A2, rat(1, 1))]).unwrap().is_zero());
    }
}
