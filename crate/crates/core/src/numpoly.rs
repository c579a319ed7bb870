//! Dense complex-double images of [`BiPoly`] for fast numeric evaluation.

use num_complex::Complex64;
use num_traits::Zero;

use crate::poly::BiPoly;

/// Dense coefficient table `coeffs[e1][e2]`.
#[derive(Clone, Debug)]
pub struct NumPoly {
    coeffs: Vec<Vec<Complex64>>,
}

impl NumPoly {
    pub fn from_bipoly(p: &BiPoly) -> Self {
        if p.is_zero() {
            return Self { coeffs: vec![vec![Complex64::zero()]] };
        }
        let d1 = p.deg_z1() as usize;
        let d2 = p.deg_z2() as usize;
        let mut coeffs = vec![vec![Complex64::zero(); d2 + 1]; d1 + 1];
        for (m, c) in p.terms() {
            coeffs[m.e1 as usize][m.e2 as usize] = c.to_complex();
        }
        Self { coeffs }
    }

    /// Numeric polynomial from explicit `(coefficient, e1, e2)` terms.
    pub fn from_terms(terms: &[(Complex64, u32, u32)]) -> Self {
        let d1 = terms.iter().map(|t| t.1).max().unwrap_or(0) as usize;
        let d2 = terms.iter().map(|t| t.2).max().unwrap_or(0) as usize;
        let mut coeffs = vec![vec![Complex64::zero(); d2 + 1]; d1 + 1];
        for &(c, e1, e2) in terms {
            coeffs[e1 as usize][e2 as usize] += c;
        }
        Self { coeffs }
    }

    pub fn deg_z1(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn deg_z2(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    pub fn coeffs(&self) -> &[Vec<Complex64>] {
        &self.coeffs
    }

    /// Adds a constant to the polynomial.
    pub fn shifted(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs[0][0] += c;
        out
    }

    pub fn eval(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        let mut acc = Complex64::zero();
        for row in self.coeffs.iter().rev() {
            let mut r = Complex64::zero();
            for c in row.iter().rev() {
                r = r * z2 + c;
            }
            acc = acc * z1 + r;
        }
        acc
    }

    /// Value and both complex partial derivatives.
    pub fn eval_grad(&self, z1: Complex64, z2: Complex64) -> (Complex64, Complex64, Complex64) {
        let mut f = Complex64::zero();
        let mut f1 = Complex64::zero();
        let mut f2 = Complex64::zero();
        for row in self.coeffs.iter().rev() {
            let mut r = Complex64::zero();
            let mut dr = Complex64::zero();
            for c in row.iter().rev() {
                dr = dr * z2 + r;
                r = r * z2 + c;
            }
            f1 = f1 * z1 + f;
            f = f * z1 + r;
            f2 = f2 * z1 + dr;
        }
        (f, f1, f2)
    }

    /// Univariate coefficients (ascending) of `z2 -> p(z1, z2)` at fixed `z1`.
    pub fn restrict_z1(&self, z1: Complex64) -> Vec<Complex64> {
        let d2 = self.deg_z2();
        let mut out = vec![Complex64::zero(); d2 + 1];
        let mut pw = Complex64::new(1.0, 0.0);
        for row in &self.coeffs {
            for (k, c) in row.iter().enumerate() {
                out[k] += c * pw;
            }
            pw *= z1;
        }
        out
    }

    /// Univariate coefficients (ascending) of `z1 -> p(z1, z2)` at fixed `z2`.
    pub fn restrict_z2(&self, z2: Complex64) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .map(|row| {
                let mut r = Complex64::zero();
                for c in row.iter().rev() {
                    r = r * z2 + c;
                }
                r
            })
            .collect()
    }

    /// Sum of coefficient moduli, a scale for relative tolerances.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().flatten().map(|c| c.norm()).sum()
    }
}
