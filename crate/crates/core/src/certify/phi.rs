use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::poly::{rat, RationalPoly, Var};
use super::CertifyError;

/// The certified quartic is six times the tensor-side quantity.
pub const PHI_SCALE: i64 = 6;

fn v(x: Var) -> RationalPoly {
    RationalPoly::var(x)
}

fn c(n: i64) -> RationalPoly {
    RationalPoly::int(n)
}

/// `Σa² − Σaᵢaⱼ` over `(a2, a3, a4)`.
pub fn p_form() -> RationalPoly {
    let (x, y, z) = (v(Var::A2), v(Var::A3), v(Var::A4));
    x.pow(2) + y.pow(2) + z.pow(2) - &x * &y - &x * &z - &y * &z
}

/// `Σa² + Σaᵢaⱼ`, half of `|R̊c|²`.
pub fn s_form() -> RationalPoly {
    let (x, y, z) = (v(Var::A2), v(Var::A3), v(Var::A4));
    x.pow(2) + y.pow(2) + z.pow(2) + &x * &y + &x * &z + &y * &z
}

/// `Σ_{i≠j} aᵢ²aⱼ − 6a2a3a4`.
pub fn q_form() -> RationalPoly {
    let (x, y, z) = (v(Var::A2), v(Var::A3), v(Var::A4));
    x.pow(2) * (&y + &z) + y.pow(2) * (&x + &z) + z.pow(2) * (&x + &y) - c(6) * &x * &y * &z
}

/// `φ = R²P − 4RQ + 8SP` in `(R, a2, a3, a4)`, with `a1 = −(a2 + a3 + a4)`.
pub fn phi_poly() -> &'static RationalPoly {
    static PHI: OnceLock<RationalPoly> = OnceLock::new();
    PHI.get_or_init(|| {
        let r = v(Var::R);
        r.pow(2) * p_form() - c(4) * &r * q_form() + c(8) * s_form() * p_form()
    })
}

/// The trace-free eigenvalue `a1` as a polynomial.
pub fn a1() -> RationalPoly {
    -(v(Var::A2) + v(Var::A3) + v(Var::A4))
}

/// Half Weyl eigenframe entries `bᵢ = −(a1 + 3aᵢ)/12`, `i = 2, 3, 4`.
pub fn b_forms() -> [RationalPoly; 3] {
    [Var::A2, Var::A3, Var::A4].map(|x| (a1() + c(3) * v(x)).scale(&rat(-1, 12)))
}

/// The four invariants `[|W±|², det W±, |R̊c|², ⟨(R̊c∘R̊c)±, W±⟩]` built from
/// the eigenframe description, without any of the closed forms above.
pub fn invariant_forms() -> [RationalPoly; 4] {
    let [b1, b2, b3] = b_forms();
    let a = [a1(), v(Var::A2), v(Var::A3), v(Var::A4)];
    let w2 = c(4) * (b1.pow(2) + b2.pow(2) + b3.pow(2));
    let det = c(8) * &b1 * &b2 * &b3;
    let ric2 = a.iter().fold(RationalPoly::zero(), |acc, x| acc + x.pow(2));
    let pair = c(2)
        * (&b1 * (&a[0] * &a[1] + &a[2] * &a[3])
            + &b2 * (&a[0] * &a[2] + &a[1] * &a[3])
            + &b3 * (&a[0] * &a[3] + &a[1] * &a[2]));
    [w2, det, ric2, pair]
}

/// `6(R²|W|² − 36R det W + 4|W|²|R̊c|² − R⟨…⟩)` from [`invariant_forms`].
pub fn phi_from_invariants() -> RationalPoly {
    let [w2, det, ric2, pair] = invariant_forms();
    let r = v(Var::R);
    let inner = r.pow(2) * &w2 - c(36) * &r * &det + c(4) * &w2 * &ric2 - &r * &pair;
    c(PHI_SCALE) * inner
}

/// Exact `φ(R, a2, a3, a4)`.
pub fn phi_eval(r: &BigRational, a2: &BigRational, a3: &BigRational, a4: &BigRational) -> BigRational {
    let p = a2 * a2 + a3 * a3 + a4 * a4 - a2 * a3 - a2 * a4 - a3 * a4;
    let s = a2 * a2 + a3 * a3 + a4 * a4 + a2 * a3 + a2 * a4 + a3 * a4;
    let q = a2 * a2 * (a3 + a4) + a3 * a3 * (a2 + a4) + a4 * a4 * (a2 + a3)
        - BigRational::from_integer(6.into()) * a2 * a3 * a4;
    r * r * &p - BigRational::from_integer(4.into()) * r * q + BigRational::from_integer(8.into()) * s * p
}

/// Largest argument modulus for which [`phi_i128`] cannot overflow: every
/// coefficient magnitude sums to at most 342 < 2⁹, so `|φ| < 2⁹·M⁴ ≤ 2¹²⁵`.
pub const I128_SAFE: i128 = 1 << 29;

/// `φ` on integers with `|x| ≤ I128_SAFE`; `None` otherwise.
pub fn phi_i128(r: i128, a2: i128, a3: i128, a4: i128) -> Option<i128> {
    if [r, a2, a3, a4].iter().any(|x| x.abs() > I128_SAFE) {
        return None;
    }
    let p = a2 * a2 + a3 * a3 + a4 * a4 - a2 * a3 - a2 * a4 - a3 * a4;
    let s = a2 * a2 + a3 * a3 + a4 * a4 + a2 * a3 + a2 * a4 + a3 * a4;
    let q = a2 * a2 * (a3 + a4) + a3 * a3 * (a2 + a4) + a4 * a4 * (a2 + a3) - 6 * a2 * a3 * a4;
    Some(r * r * p - 4 * r * q + 8 * s * p)
}

/// Which branch of the equality taxonomy a point falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EqualityClass {
    Positive,
    /// `a2 = a3 = a4`: the half Weyl tensor vanishes.
    ZeroWeyl,
    /// `{a2, a3, a4} = {−a, a, a}` with `R = 4a`, `a ≠ 0`.
    ZeroKahler,
}

fn kahler_pattern(r: &BigRational, a: [&BigRational; 3]) -> bool {
    (0..3).any(|i| {
        let (x, y, z) = (a[i], a[(i + 1) % 3], a[(i + 2) % 3]);
        y == z && !y.is_zero() && *x == -y.clone() && *r == BigRational::from_integer(4.into()) * y
    })
}

/// Evaluate `φ` exactly and place the point in the taxonomy. A negative value
/// or a zero outside both patterns is a hard failure.
///
/// The pattern is accepted with either sign of `a`: `φ` is even, so
/// `(−R, −a)` is a zero whenever `(R, a)` is.
pub fn classify_equality(
    r: &BigRational,
    a2: &BigRational,
    a3: &BigRational,
    a4: &BigRational,
) -> Result<EqualityClass, CertifyError> {
    let value = phi_eval(r, a2, a3, a4);
    let point = || [r, a2, a3, a4].map(super::poly::rational_string);
    if value.is_negative() {
        return Err(CertifyError::Negative { point: point(), value: super::poly::rational_string(&value) });
    }
    if value.is_positive() {
        return Ok(EqualityClass::Positive);
    }
    if a2 == a3 && a3 == a4 {
        Ok(EqualityClass::ZeroWeyl)
    } else if kahler_pattern(r, [a2, a3, a4]) {
        Ok(EqualityClass::ZeroKahler)
    } else {
        Err(CertifyError::UnclassifiedZero { point: point() })
    }
}

/// Default denominator cap for [`rationalize`].
pub const RATIONALIZE_CAP: u64 = 1_000_000_000;

/// Last continued-fraction convergent of `x` with denominator at most `cap`.
pub fn rationalize(x: f64, cap: u64) -> Option<BigRational> {
    let exact = BigRational::from_float(x)?;
    let cap = BigInt::from(cap);
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = exact;
    loop {
        let a = rest.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > cap {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
    }
    Some(BigRational::new(h1, k1))
}

/// `φ` at float arguments, each replaced by its [`rationalize`] convergent
/// and evaluated exactly; `None` for non-finite input.
pub fn phi_at_floats(r: f64, a2: f64, a3: f64, a4: f64) -> Option<f64> {
    let q = |x: f64| rationalize(x, RATIONALIZE_CAP);
    phi_eval(&q(r)?, &q(a2)?, &q(a3)?, &q(a4)?).to_f64()
}
