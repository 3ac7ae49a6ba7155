use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::poly::rational_string;
use super::CertifyError;

/// Dense univariate polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    c: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn lead(&self) -> &BigRational {
        self.c.last().expect("zero polynomial has no leading coefficient")
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.c.iter().rev().fold(BigRational::zero(), |acc, a| acc * x + a)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.c.iter().enumerate().skip(1).map(|(k, a)| a * BigRational::from_integer(k.into())).collect())
    }

    fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.c.iter().map(|a| a * s).collect())
    }

    fn monic(&self) -> Self {
        self.scale(&self.lead().recip())
    }

    fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new(
            (0..n)
                .map(|k| self.c.get(k).cloned().unwrap_or_default() - o.c.get(k).cloned().unwrap_or_default())
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::new(vec![]);
        }
        let mut out = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.c.clone();
        let mut q = vec![BigRational::zero(); self.c.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap() / d.lead();
            for (j, b) in d.c.iter().enumerate() {
                r[k + j] -= &f * b;
            }
            q[k] = f;
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (Self::new(q), Self::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Square-free factorization (Yun): `self = c · Π fᵢ^i` with monic,
    /// pairwise coprime, square-free `fᵢ`. Returns `c` and the nonconstant
    /// factors with their multiplicities.
    pub fn square_free_factors(&self) -> (BigRational, Vec<(UniPoly, u32)>) {
        let c = self.lead().clone();
        let f = self.monic();
        let mut out = Vec::new();
        if f.degree() == Some(0) {
            return (c, out);
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let mut d = df.div_rem(&a0).0.sub(&b.derivative());
        let mut i = 1;
        while b.degree() > Some(0) {
            let a = b.gcd(&d);
            let nb = b.div_rem(&a).0;
            let c_next = d.div_rem(&a).0;
            if a.degree() > Some(0) {
                out.push((a, i));
            }
            d = c_next.sub(&nb.derivative());
            b = nb;
            i += 1;
        }
        (c, out)
    }

    pub fn sturm_sequence(&self) -> Vec<UniPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            seq.push(r.scale(&-BigRational::one()));
        }
        seq.pop();
        seq
    }
}

fn sign(x: &BigRational) -> i8 {
    match x.cmp(&BigRational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

fn variations(seq: &[UniPoly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for s in seq.iter().map(|p| sign(&p.eval(x))).filter(|s| *s != 0) {
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Distinct roots of the square-free `seq[0]` in the open interval `(lo, hi)`.
fn count_open(seq: &[UniPoly], lo: &BigRational, hi: &BigRational) -> usize {
    let at_hi = seq[0].eval(hi).is_zero();
    variations(seq, lo) - variations(seq, hi) - usize::from(at_hi)
}

/// Where nonnegativity is asked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    Real,
    Interval(BigRational, BigRational),
}

/// One real root: exact when bisection landed on it, otherwise isolated in
/// the open interval `(lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootInfo {
    #[serde(serialize_with = "ser_rational")]
    pub lo: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub hi: BigRational,
    #[serde(serialize_with = "ser_opt_rational")]
    pub exact: Option<BigRational>,
    pub multiplicity: u32,
}

pub(crate) fn ser_rational<S: serde::Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(x))
}

fn ser_opt_rational<S: serde::Serializer>(x: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&rational_string(v)),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug)]
struct Isolated {
    lo: BigRational,
    hi: BigRational,
    exact: Option<BigRational>,
    factor: usize,
}

impl Isolated {
    fn left(&self) -> &BigRational {
        self.exact.as_ref().unwrap_or(&self.lo)
    }

    fn right(&self) -> &BigRational {
        self.exact.as_ref().unwrap_or(&self.hi)
    }

    fn refine(&mut self, seq: &[UniPoly]) {
        if self.exact.is_some() {
            return;
        }
        let m = (&self.lo + &self.hi) / BigRational::from_integer(2.into());
        if seq[0].eval(&m).is_zero() {
            self.lo = m.clone();
            self.hi = m.clone();
            self.exact = Some(m);
        } else if count_open(seq, &self.lo, &m) == 1 {
            self.hi = m;
        } else {
            self.lo = m;
        }
    }
}

/// Power of two strictly above every root modulus (Cauchy bound).
fn root_bound(p: &UniPoly) -> BigRational {
    let lead = p.lead().abs();
    let m = p.c.iter().map(|a| a.abs() / &lead).max().unwrap_or_default() + BigRational::one();
    let mut b = BigRational::one();
    while b <= m {
        b *= BigRational::from_integer(2.into());
    }
    b
}

fn isolate(seq: &[UniPoly], factor: usize, lo: BigRational, hi: BigRational, out: &mut Vec<Isolated>) {
    let mut stack = vec![(lo, hi)];
    while let Some((l, h)) = stack.pop() {
        match count_open(seq, &l, &h) {
            0 => {}
            1 => out.push(Isolated { lo: l, hi: h, exact: None, factor }),
            _ => {
                let m = (&l + &h) / BigRational::from_integer(2.into());
                if seq[0].eval(&m).is_zero() {
                    out.push(Isolated { lo: m.clone(), hi: m.clone(), exact: Some(m.clone()), factor });
                }
                stack.push((m.clone(), h));
                stack.push((l, m));
            }
        }
    }
}

/// Outcome of a nonnegativity decision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SturmReport {
    pub nonnegative: bool,
    pub roots: Vec<RootInfo>,
    /// A point of the domain where the polynomial is negative.
    #[serde(serialize_with = "ser_opt_rational")]
    pub witness: Option<BigRational>,
}

/// Bisection steps used to polish isolating intervals.
const POLISH_STEPS: usize = 40;

/// Decide `p ≥ 0` on `domain` exactly. Real roots of every square-free factor
/// are isolated with Sturm counts, separated, and the sign of `p` is
/// evaluated at one rational point of each gap between them.
pub fn sturm_nonneg(p: &UniPoly, domain: &Domain) -> Result<SturmReport, CertifyError> {
    if p.is_zero() {
        return Err(CertifyError::ZeroPolynomial);
    }
    if let Domain::Interval(lo, hi) = domain {
        if lo > hi {
            return Err(CertifyError::EmptyInterval);
        }
    }
    let (_, factors) = p.square_free_factors();
    let seqs: Vec<Vec<UniPoly>> = factors.iter().map(|(f, _)| f.sturm_sequence()).collect();
    let (lo, hi) = match domain {
        Domain::Real => {
            let b = factors.iter().map(|(f, _)| root_bound(f)).max().unwrap_or_else(BigRational::one);
            (-b.clone(), b)
        }
        Domain::Interval(lo, hi) => (lo.clone(), hi.clone()),
    };

    let mut roots = Vec::new();
    for (i, seq) in seqs.iter().enumerate() {
        isolate(seq, i, lo.clone(), hi.clone(), &mut roots);
        if let Domain::Interval(..) = domain {
            for x in [&lo, &hi] {
                if seq[0].eval(x).is_zero() && !roots.iter().any(|r| r.factor == i && r.exact.as_ref() == Some(x)) {
                    roots.push(Isolated { lo: x.clone(), hi: x.clone(), exact: Some(x.clone()), factor: i });
                }
            }
        }
    }
    for r in &mut roots {
        for _ in 0..POLISH_STEPS {
            r.refine(&seqs[r.factor]);
        }
    }
    // separate isolating intervals of different factors
    loop {
        roots.sort_by(|a, b| a.left().cmp(b.left()));
        let clash = (1..roots.len()).find(|&i| roots[i - 1].right() >= roots[i].left());
        let Some(i) = clash else { break };
        let (a, b) = roots.split_at_mut(i);
        a[i - 1].refine(&seqs[a[i - 1].factor]);
        b[0].refine(&seqs[b[0].factor]);
    }

    let two = BigRational::from_integer(2.into());
    let mut samples = Vec::new();
    if let Domain::Interval(..) = domain {
        samples.push(lo.clone());
        samples.push(hi.clone());
    }
    let mut edges = vec![lo.clone()];
    for r in &roots {
        edges.push(r.left().clone());
        edges.push(r.right().clone());
    }
    edges.push(hi.clone());
    for gap in edges.chunks(2) {
        if gap[0] < gap[1] {
            samples.push((&gap[0] + &gap[1]) / &two);
        }
    }
    if let Domain::Real = domain {
        samples.push(&lo - BigRational::one());
        samples.push(&hi + BigRational::one());
    }
    let witness = samples.into_iter().find(|x| p.eval(x).is_negative());

    let roots = roots
        .into_iter()
        .map(|r| RootInfo { lo: r.lo, hi: r.hi, exact: r.exact, multiplicity: factors[r.factor].1 })
        .collect();
    Ok(SturmReport { nonnegative: witness.is_none(), roots, witness })
}

/// `x − r` as a polynomial.
pub fn linear(r: &BigRational) -> UniPoly {
    UniPoly::new(vec![-r.clone(), BigRational::one()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::poly::rat;

    #[test]
    fn square_of_linear_is_nonnegative_with_double_root() {
        let p = UniPoly::from_ints(&[1, -2, 1]);
        let r = sturm_nonneg(&p, &Domain::Real).unwrap();
        assert!(r.nonnegative);
        assert_eq!(r.roots.len(), 1);
        assert_eq!(r.roots[0].exact, Some(rat(1, 1)));
        assert_eq!(r.roots[0].multiplicity, 2);
    }

    #[test]
    fn identity_changes_sign_on_interval() {
        let p = UniPoly::from_ints(&[0, 1]);
        let r = sturm_nonneg(&p, &Domain::Interval(rat(-1, 1), rat(1, 1))).unwrap();
        assert!(!r.nonnegative);
        assert!(r.witness.unwrap() < rat(0, 1));
        assert!(sturm_nonneg(&p, &Domain::Interval(rat(0, 1), rat(1, 1))).unwrap().nonnegative);
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        assert!(matches!(sturm_nonneg(&UniPoly::new(vec![]), &Domain::Real), Err(CertifyError::ZeroPolynomial)));
    }

    #[test]
    fn irrational_roots_are_isolated() {
        // (x² − 2)² (x − 1/3) has a sign change at 1/3 only
        let a = UniPoly::from_ints(&[-2, 0, 1]);
        let p = a.mul(&a).mul(&linear(&rat(1, 3)));
        let r = sturm_nonneg(&p, &Domain::Real).unwrap();
        assert!(!r.nonnegative);
        assert_eq!(r.roots.len(), 3);
        let doubles: Vec<_> = r.roots.iter().filter(|x| x.multiplicity == 2).collect();
        assert_eq!(doubles.len(), 2);
        for d in doubles {
            assert!(d.exact.is_none());
            assert!(&d.hi - &d.lo < rat(1, 1 << 30));
        }
        // x² + 1 has no real roots
        let q = UniPoly::from_ints(&[1, 0, 1]);
        let r = sturm_nonneg(&q, &Domain::Real).unwrap();
        assert!(r.nonnegative && r.roots.is_empty());
    }

    #[test]
    fn yun_recovers_multiplicities() {
        let a = linear(&rat(1, 1));
        let b = linear(&rat(-2, 1));
        let p = a.mul(&b).mul(&b).mul(&b).scale(&rat(5, 1));
        let (c, f) = p.square_free_factors();
        assert_eq!(c, rat(5, 1));
        assert_eq!(f, vec![(a, 1), (b, 3)]);
    }

    #[test]
    fn endpoint_roots_on_interval() {
        // x(1 − x) ≥ 0 on [0, 1] with roots at both ends
        let p = UniPoly::from_ints(&[0, 1, -1]);
        let r = sturm_nonneg(&p, &Domain::Interval(rat(0, 1), rat(1, 1))).unwrap();
        assert!(r.nonnegative);
        assert_eq!(r.roots.len(), 2);
        assert!(!sturm_nonneg(&p, &Domain::Interval(rat(0, 1), rat(2, 1))).unwrap().nonnegative);
    }
}
