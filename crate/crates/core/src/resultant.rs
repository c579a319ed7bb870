//! Sylvester resultants, evaluated exactly by fraction-free (Bareiss)
//! elimination with polynomial entries.

use crate::error::PolyError;
use crate::poly::{BiPoly, Var};

/// The Sylvester matrix of `a` and `b` with respect to `var`. Entries are
/// polynomials in the remaining variable.
pub fn sylvester_matrix(a: &BiPoly, b: &BiPoly, var: Var) -> Result<Vec<Vec<BiPoly>>, PolyError> {
    let m = a.degree_in(var) as usize;
    let n = b.degree_in(var) as usize;
    if a.is_zero() || b.is_zero() || m == 0 || n == 0 {
        return Err(PolyError::DegenerateDegree);
    }
    let ca = a.coeffs_in(var);
    let cb = b.coeffs_in(var);
    let size = m + n;
    let mut rows = vec![vec![BiPoly::zero(); size]; size];
    // Highest power first in each row.
    for i in 0..n {
        for (k, c) in ca.iter().enumerate() {
            rows[i][i + m - k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in cb.iter().enumerate() {
            rows[n + i][i + n - k] = c.clone();
        }
    }
    Ok(rows)
}

/// Exact determinant of a square matrix of polynomials.
pub fn determinant(mut m: Vec<Vec<BiPoly>>) -> BiPoly {
    let n = m.len();
    if n == 0 {
        return BiPoly::one();
    }
    let mut sign_neg = false;
    let mut prev = BiPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_neg = !sign_neg;
                }
                None => return BiPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num
                    .divide_exact(&prev)
                    .expect("Bareiss step divides exactly");
            }
            m[i][k] = BiPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_neg {
        -det
    } else {
        det
    }
}

/// `Res_var(a, b)`, a polynomial in the other variable.
pub fn resultant(a: &BiPoly, b: &BiPoly, var: Var) -> Result<BiPoly, PolyError> {
    Ok(determinant(sylvester_matrix(a, b, var)?))
}
