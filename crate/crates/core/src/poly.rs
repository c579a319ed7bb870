//! Sparse bivariate polynomials over Q(i).
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lex with `z1 > z2`; the last entry is therefore the leading term.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::PolyError;
use crate::gaussian::GaussianRational;

/// Exponent pair `z1^e1 * z2^e2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    pub e1: u32,
    pub e2: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { e1: 0, e2: 0 };

    pub fn new(e1: u32, e2: u32) -> Self {
        Self { e1, e2 }
    }

    pub fn degree(&self) -> u32 {
        self.e1 + self.e2
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.e1 <= other.e1 && self.e2 <= other.e2
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.e1 + other.e1, self.e2 + other.e2)
    }

    /// `other / self`; caller checks divisibility.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial::new(other.e1 - self.e1, other.e2 - self.e2)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.e1.cmp(&other.e1))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Var {
    Z1,
    Z2,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::Z1 => Var::Z2,
            Var::Z2 => Var::Z1,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::term(c, 0, 0)
    }

    pub fn term(c: GaussianRational, e1: u32, e2: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::new(e1, e2), c);
        p
    }

    pub fn z1() -> Self {
        Self::term(GaussianRational::one(), 1, 0)
    }

    pub fn z2() -> Self {
        Self::term(GaussianRational::one(), 0, 1)
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::Z1 => Self::z1(),
            Var::Z2 => Self::z2(),
        }
    }

    /// Builds a polynomial from integer-coefficient terms `(c, e1, e2)`.
    pub fn from_int_terms(terms: &[(i64, u32, u32)]) -> Self {
        let mut p = Self::zero();
        for &(c, e1, e2) in terms {
            p.add_term(Monomial::new(e1, e2), GaussianRational::from_int(c));
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, GaussianRational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c * m` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e1: u32, e2: u32) -> GaussianRational {
        self.terms
            .get(&Monomial::new(e1, e2))
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<GaussianRational> {
        if self.is_constant() {
            Some(self.coeff(0, 0))
        } else {
            None
        }
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms
            .keys()
            .map(|m| match v {
                Var::Z1 => m.e1,
                Var::Z2 => m.e2,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn deg_z1(&self) -> u32 {
        self.degree_in(Var::Z1)
    }

    pub fn deg_z2(&self) -> u32 {
        self.degree_in(Var::Z2)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> GaussianRational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff().inv() {
            Some(inv) => self.scale(&inv),
            None => Self::zero(),
        }
    }

    pub fn mul_monomial(&self, m: Monomial) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (k.mul(&m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Conjugates every coefficient.
    pub fn conj_coeffs(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect(),
        }
    }

    pub fn swap_vars(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.e2, m.e1), c.clone()))
                .collect(),
        }
    }

    pub fn partial_derivative(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (e, dm) = match v {
                Var::Z1 if m.e1 > 0 => (m.e1, Monomial::new(m.e1 - 1, m.e2)),
                Var::Z2 if m.e2 > 0 => (m.e2, Monomial::new(m.e1, m.e2 - 1)),
                _ => continue,
            };
            out.add_term(dm, c * &GaussianRational::from_int(e as i64));
        }
        out
    }

    /// Evaluates at a complex point with nested Horner in `z1` then `z2`.
    pub fn evaluate(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        crate::numpoly::NumPoly::from_bipoly(self).eval(z1, z2)
    }

    /// Substitutes `z1 <- f1`, `z2 <- f2`.
    pub fn compose(&self, f1: &BiPoly, f2: &BiPoly) -> BiPoly {
        let p1 = powers(f1, self.deg_z1());
        let p2 = powers(f2, self.deg_z2());
        let mut out = BiPoly::zero();
        for (m, c) in &self.terms {
            let t = (&p1[m.e1 as usize] * &p2[m.e2 as usize]).scale(c);
            out = &out + &t;
        }
        out
    }

    /// `P(p1, p2)` for a map `psi = (p1, p2)`.
    pub fn compose_with_map(&self, psi: (&BiPoly, &BiPoly)) -> BiPoly {
        self.compose(psi.0, psi.1)
    }

    /// Conjugate reflection `K(w) = w1^m w2^n conj(P)(1/w1, 1/w2)` with
    /// `m = deg_z1 P` and `n = deg_z2 P`.
    pub fn conjugate_reflect(&self) -> Result<(BiPoly, u32, u32), PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let m = self.deg_z1();
        let n = self.deg_z2();
        let k = BiPoly::from_terms(
            self.terms
                .iter()
                .map(|(mono, c)| (Monomial::new(m - mono.e1, n - mono.e2), c.conj())),
        );
        Ok((k, m, n))
    }

    /// Exact division; fails unless `divisor` divides `self`.
    pub fn divide_exact(&self, divisor: &BiPoly) -> Result<BiPoly, PolyError> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::NotDivisible)
        }
    }

    pub fn divides(&self, other: &BiPoly) -> bool {
        !self.is_zero() && other.div_rem(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    /// Graded-lex division by a single polynomial. The remainder is the
    /// unique normal form modulo the principal ideal `(divisor)`.
    pub fn div_rem(&self, divisor: &BiPoly) -> Result<(BiPoly, BiPoly), PolyError> {
        let (lm, lc) = match divisor.leading_term() {
            Some((m, c)) => (*m, c.clone()),
            None => return Err(PolyError::DivisionByZero),
        };
        let lc_inv = lc.inv().expect("nonzero leading coefficient");
        let mut p = self.clone();
        let mut q = BiPoly::zero();
        let mut r = BiPoly::zero();
        while let Some((m, c)) = p.leading_term().map(|(m, c)| (*m, c.clone())) {
            if lm.divides(&m) {
                let tm = lm.quotient_of(&m);
                let tc = &c * &lc_inv;
                for (dm, dc) in &divisor.terms {
                    p.add_term(dm.mul(&tm), -(dc * &tc));
                }
                q.add_term(tm, tc);
            } else {
                p.terms.remove(&m);
                r.add_term(m, c);
            }
        }
        Ok((q, r))
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let e1 = self.terms.keys().map(|m| m.e1).min().unwrap_or(0);
        let e2 = self.terms.keys().map(|m| m.e2).min().unwrap_or(0);
        Monomial::new(e1, e2)
    }

    pub fn div_monomial(&self, m: Monomial) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    assert!(m.divides(k), "monomial does not divide every term");
                    (m.quotient_of(k), c.clone())
                })
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_weighted_homogeneous(1, 1)
    }

    /// True when every term has the same weighted degree `a*e1 + b*e2`.
    pub fn is_weighted_homogeneous(&self, a: u32, b: u32) -> bool {
        let mut it = self.terms.keys().map(|m| a * m.e1 + b * m.e2);
        match it.next() {
            Some(d) => it.all(|x| x == d),
            None => true,
        }
    }

    /// Terms of maximal weighted degree `a*e1 + b*e2`.
    pub fn weighted_top_form(&self, a: u32, b: u32) -> BiPoly {
        let d = self.terms.keys().map(|m| a * m.e1 + b * m.e2).max().unwrap_or(0);
        BiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| a * m.e1 + b * m.e2 == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Coefficients of `self` as a polynomial in `v`, each a polynomial in
    /// the other variable (still stored as a `BiPoly` in that variable's slot).
    pub fn coeffs_in(&self, v: Var) -> Vec<BiPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![BiPoly::zero(); if self.is_zero() { 0 } else { d + 1 }];
        for (m, c) in &self.terms {
            let (k, rest) = match v {
                Var::Z1 => (m.e1, Monomial::new(0, m.e2)),
                Var::Z2 => (m.e2, Monomial::new(m.e1, 0)),
            };
            out[k as usize].add_term(rest, c.clone());
        }
        out
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in).
    pub fn from_coeffs_in(v: Var, coeffs: &[BiPoly]) -> BiPoly {
        let mut out = BiPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let m = match v {
                Var::Z1 => Monomial::new(k as u32, 0),
                Var::Z2 => Monomial::new(0, k as u32),
            };
            out = &out + &c.mul_monomial(m);
        }
        out
    }

    /// Renders with custom variable names, e.g. `["w1", "w2"]`.
    pub fn render_with(&self, names: [&str; 2]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, coeff) = c.term_parts();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if let Some(cs) = coeff {
                factors.push(cs);
            }
            for (name, e) in [(names[0], m.e1), (names[1], m.e2)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() {
                factors.push("1".to_string());
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

fn powers(f: &BiPoly, max: u32) -> Vec<BiPoly> {
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(BiPoly::one());
    for k in 1..=max as usize {
        let next = &out[k - 1] * f;
        out.push(next);
    }
    out
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(["z1", "z2"]))
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}

impl Serialize for BiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'a> Add<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl<'a> Mul<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: BiPoly) -> BiPoly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}
