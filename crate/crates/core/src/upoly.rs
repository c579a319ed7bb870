//! Dense univariate polynomials over Q(i), used by the gcd, factorization
//! and Hensel lifting code.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::gaussian::GaussianRational;
use crate::poly::{BiPoly, Monomial, Var};

/// Coefficients in ascending order, with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<GaussianRational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    /// `x - a`
    pub fn linear(a: GaussianRational) -> Self {
        Self::new(vec![-a, GaussianRational::one()])
    }

    pub fn x() -> Self {
        Self::new(vec![GaussianRational::zero(), GaussianRational::one()])
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> GaussianRational {
        self.coeffs.last().cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn monic(&self) -> Self {
        match self.lc().inv() {
            Some(inv) => self.scale(&inv),
            None => Self::zero(),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &GaussianRational::from_int(k as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let inv = d.lc().inv().expect("nonzero");
        let dd = d.degree();
        let mut r = self.coeffs.clone();
        if r.len() < d.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![GaussianRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.coeffs.iter().enumerate() {
                let t = b * &c;
                r[k + j] -= &t;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lc().inv() {
            Some(inv) => (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)),
            None => (r0, s0, t0),
        }
    }

    /// Inverse of `self` modulo `m`, if it exists.
    pub fn inverse_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.rem(m).xgcd(m);
        if g.degree() == 0 && !g.is_zero() {
            Some(s.rem(m))
        } else {
            None
        }
    }

    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(GaussianRational::to_complex).collect()
    }

    /// Embeds as a bivariate polynomial in variable `v`.
    pub fn to_bipoly(&self, v: Var) -> BiPoly {
        BiPoly::from_terms(self.coeffs.iter().enumerate().map(|(k, c)| {
            let m = match v {
                Var::Z1 => Monomial::new(k as u32, 0),
                Var::Z2 => Monomial::new(0, k as u32),
            };
            (m, c.clone())
        }))
    }

    /// Reads a bivariate polynomial that only involves `v`.
    pub fn from_bipoly(p: &BiPoly, v: Var) -> Option<Self> {
        if p.degree_in(v.other()) > 0 {
            return None;
        }
        let d = p.degree_in(v) as usize;
        let mut coeffs = vec![GaussianRational::zero(); d + 1];
        for (m, c) in p.terms() {
            let k = match v {
                Var::Z1 => m.e1,
                Var::Z2 => m.e2,
            };
            coeffs[k as usize] = c.clone();
        }
        Some(Self::new(coeffs))
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly({})", self.to_bipoly(Var::Z1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&v| GaussianRational::from_int(v)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = up(&[-2, 1, 1]);
        let b = up(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), up(&[-1, 1]));
        let (q, r) = a.div_rem(&up(&[-1, 1]));
        assert_eq!(q, up(&[2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn xgcd_identity() {
        let a = up(&[1, 0, 1]);
        let b = up(&[-1, 1]);
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(g, UPoly::one());
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
        let inv = b.inverse_mod(&a).unwrap();
        assert_eq!(inv.mul(&b).rem(&a), UPoly::one());
    }
}
