//! Polynomials over a monomial denominator, `N(z) / (z1^d1 * z2^d2)`.

use std::fmt;

use num_complex::Complex64;

use crate::gaussian::GaussianRational;
use crate::poly::{BiPoly, Monomial, Var};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentFraction {
    numerator: BiPoly,
    d1: u32,
    d2: u32,
}

impl LaurentFraction {
    /// Builds and normalizes: common monomial factors are cancelled.
    pub fn new(numerator: BiPoly, d1: u32, d2: u32) -> Self {
        if numerator.is_zero() {
            return Self { numerator, d1: 0, d2: 0 };
        }
        let content = numerator.monomial_content();
        let c1 = content.e1.min(d1);
        let c2 = content.e2.min(d2);
        Self {
            numerator: numerator.div_monomial(Monomial::new(c1, c2)),
            d1: d1 - c1,
            d2: d2 - c2,
        }
    }

    pub fn numerator(&self) -> &BiPoly {
        &self.numerator
    }

    pub fn denominator_exponents(&self) -> (u32, u32) {
        (self.d1, self.d2)
    }

    pub fn is_polynomial(&self) -> bool {
        self.d1 == 0 && self.d2 == 0
    }

    /// Value at a point with nonzero coordinates (where needed).
    pub fn evaluate(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        self.numerator.evaluate(z1, z2) / (z1.powu(self.d1) * z2.powu(self.d2))
    }

    /// Quotient rule specialised to monomial denominators.
    pub fn partial_derivative(&self, v: Var) -> LaurentFraction {
        let dn = self.numerator.partial_derivative(v);
        let (x, d) = match v {
            Var::Z1 => (BiPoly::z1(), self.d1),
            Var::Z2 => (BiPoly::z2(), self.d2),
        };
        let num = &(&x * &dn) - &self.numerator.scale(&GaussianRational::from_int(d as i64));
        match v {
            Var::Z1 => LaurentFraction::new(num, self.d1 + 1, self.d2),
            Var::Z2 => LaurentFraction::new(num, self.d1, self.d2 + 1),
        }
    }
}

impl fmt::Display for LaurentFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mono = BiPoly::term(GaussianRational::from_int(1), self.d1, self.d2);
        if self.is_polynomial() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({})/({})", self.numerator, mono)
        }
    }
}
