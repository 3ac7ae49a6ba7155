use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use sha2::{Digest, Sha256};

use super::univariate::UniPoly;

/// Indeterminates used by the certifier, in monomial-order priority.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    R,
    A2,
    A3,
    A4,
    T,
    K,
}

impl Var {
    pub const ALL: [Var; 6] = [Var::R, Var::A2, Var::A3, Var::A4, Var::T, Var::K];

    pub fn name(self) -> &'static str {
        match self {
            Var::R => "R",
            Var::A2 => "a2",
            Var::A3 => "a3",
            Var::A4 => "a4",
            Var::T => "t",
            Var::K => "k",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

pub type Exponents = [u32; 6];

/// `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact rational as `"p/q"`, always with a denominator.
pub fn rational_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are stored in lexicographic exponent order with `R > a2 > a3 > a4 >
/// t > k`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RationalPoly {
    terms: BTreeMap<Exponents, BigRational>,
}

impl RationalPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial([0; 6], c)
    }

    pub fn int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 6];
        e[v.index()] = 1;
        Self::monomial(e, BigRational::one())
    }

    pub fn monomial(exps: Exponents, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Variables that occur with positive exponent, in `Var` order.
    pub fn variables(&self) -> Vec<Var> {
        Var::ALL.into_iter().filter(|v| self.degree_in(*v) > 0).collect()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|e| e[v.index()]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// True when every term has total degree `d`.
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    fn add_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::int(1);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn derivative(&self, v: Var) -> Self {
        let i = v.index();
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = *e;
                f[i] -= 1;
                out.add_term(f, c * BigRational::from_integer(e[i].into()));
            }
        }
        out
    }

    /// Replace `v` by the polynomial `by`.
    pub fn substitute(&self, v: Var, by: &RationalPoly) -> Self {
        let i = v.index();
        let mut powers = vec![Self::int(1)];
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let n = e[i] as usize;
            while powers.len() <= n {
                let next = powers.last().unwrap() * by;
                powers.push(next);
            }
            let mut rest = *e;
            rest[i] = 0;
            out = out + &Self::monomial(rest, c.clone()) * &powers[n];
        }
        out
    }

    pub fn substitute_value(&self, v: Var, x: &BigRational) -> Self {
        self.substitute(v, &Self::constant(x.clone()))
    }

    /// Exchange two variables.
    pub fn swap_vars(&self, a: Var, b: Var) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut f = *e;
            f.swap(a.index(), b.index());
            out.add_term(f, c.clone());
        }
        out
    }

    /// Evaluate at a full assignment. `None` if a variable is left unassigned.
    pub fn eval(&self, values: &[(Var, BigRational)]) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for v in Var::ALL {
                let k = e[v.index()];
                if k == 0 {
                    continue;
                }
                let x = values.iter().find(|(w, _)| *w == v)?;
                term *= num_traits::pow(x.1.clone(), k as usize);
            }
            acc += term;
        }
        Some(acc)
    }

    fn leading(&self) -> Option<(&Exponents, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Multivariate division in lex order: `self = q·d + r` with no term of
    /// `r` divisible by the leading monomial of `d`.
    pub fn div_rem(&self, d: &RationalPoly) -> (RationalPoly, RationalPoly) {
        let (de, dc) = d.leading().map(|(e, c)| (*e, c.clone())).expect("division by zero polynomial");
        let mut p = self.clone();
        let mut q = Self::zero();
        let mut r = Self::zero();
        while let Some((e, c)) = p.leading().map(|(e, c)| (*e, c.clone())) {
            if e.iter().zip(&de).all(|(a, b)| a >= b) {
                let mut m = e;
                for (x, y) in m.iter_mut().zip(&de) {
                    *x -= y;
                }
                let t = Self::monomial(m, c / &dc);
                p = p - &t * d;
                q = q + t;
            } else {
                p.terms.remove(&e);
                r.add_term(e, c);
            }
        }
        (q, r)
    }

    /// Coefficients of `v⁰, v¹, …` as polynomials free of `v`.
    pub fn coefficients_in(&self, v: Var) -> Vec<RationalPoly> {
        let i = v.index();
        let mut out = vec![Self::zero(); self.degree_in(v) as usize + 1];
        for (e, c) in &self.terms {
            let mut rest = *e;
            rest[i] = 0;
            out[e[i] as usize].add_term(rest, c.clone());
        }
        out
    }

    /// Univariate view, if no variable other than `v` occurs.
    pub fn to_univariate(&self, v: Var) -> Option<UniPoly> {
        if self.variables().iter().any(|w| *w != v) {
            return None;
        }
        let mut c = vec![BigRational::zero(); self.degree_in(v) as usize + 1];
        for (e, x) in &self.terms {
            c[e[v.index()] as usize] = x.clone();
        }
        Some(UniPoly::new(c))
    }

    pub fn from_univariate(p: &UniPoly, v: Var) -> Self {
        let mut out = Self::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            let mut e = [0; 6];
            e[v.index()] = k as u32;
            out.add_term(e, c.clone());
        }
        out
    }

    /// Hex SHA-256 of the canonical text form.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            match (n, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mono: Vec<String> = Var::ALL
                .iter()
                .filter(|v| e[v.index()] > 0)
                .map(|v| match e[v.index()] {
                    1 => v.name().to_string(),
                    k => format!("{}^{k}", v.name()),
                })
                .collect();
            let coeff = if mag.is_integer() { mag.numer().to_string() } else { rational_string(&mag) };
            if mono.is_empty() {
                f.write_str(&coeff)?;
            } else if mag.is_one() {
                f.write_str(&mono.join("*"))?;
            } else {
                write!(f, "{coeff}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalPoly({self})")
    }
}

impl Add<&RationalPoly> for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub<&RationalPoly> for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul<&RationalPoly> for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        let mut out = RationalPoly::zero();
        for (e, c) in &self.terms {
            for (f, d) in &rhs.terms {
                let mut g = *e;
                for (x, y) in g.iter_mut().zip(f) {
                    *x += y;
                }
                out.add_term(g, c * d);
            }
        }
        out
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<RationalPoly> for RationalPoly {
            type Output = RationalPoly;
            fn $m(self, rhs: RationalPoly) -> RationalPoly { (&self).$m(&rhs) }
        }
        impl $tr<&RationalPoly> for RationalPoly {
            type Output = RationalPoly;
            fn $m(self, rhs: &RationalPoly) -> RationalPoly { (&self).$m(rhs) }
        }
        impl $tr<RationalPoly> for &RationalPoly {
            type Output = RationalPoly;
            fn $m(self, rhs: RationalPoly) -> RationalPoly { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        -&self
    }
}
