//! Simultaneous root finding for univariate complex polynomials
//! (Aberth–Ehrlich iteration with Newton polishing).

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::NumericError;

pub const MAX_ITERATIONS: usize = 200;

/// `(p(z), p'(z))` for ascending coefficients.
pub fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn abs_poly(coeffs: &[Complex64], r: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

/// Drops leading coefficients that are negligible relative to the largest.
pub fn trim_leading(coeffs: &[Complex64], rel_tol: f64) -> Vec<Complex64> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut out = coeffs.to_vec();
    while out.last().is_some_and(|c| c.norm() <= rel_tol * scale) {
        out.pop();
    }
    out
}

/// All complex roots of the polynomial with ascending `coeffs`, which must
/// have a nonzero leading coefficient. Converged roots satisfy a backward
/// error criterion, so clusters and multiple roots terminate too.
pub fn aberth(coeffs: &[Complex64], seed: u64) -> Result<Vec<Complex64>, NumericError> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[n];
    if lead.norm() == 0.0 || !lead.norm().is_finite() {
        return Err(NumericError::InvalidArgument("zero leading coefficient".into()));
    }
    if n == 1 {
        return Ok(vec![-coeffs[0] / lead]);
    }
    let radius = 1.0
        + coeffs[..n]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offset: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let jitter: f64 = rng.gen_range(0.5..1.0);
            Complex64::from_polar(
                radius * jitter,
                offset + std::f64::consts::TAU * k as f64 / n as f64,
            )
        })
        .collect();
    let mut done = vec![false; n];
    let eps = f64::EPSILON;
    for _ in 0..MAX_ITERATIONS {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = eval_with_derivative(coeffs, z[i]);
            if p.norm() <= 8.0 * eps * abs_poly(coeffs, z[i].norm()) {
                done[i] = true;
                continue;
            }
            all_done = false;
            let ratio = p / dp;
            let mut sum = Complex64::zero();
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 0.0 {
                        sum += diff.inv();
                    }
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
                if w.norm() <= eps * z[i].norm() {
                    done[i] = true;
                }
            } else {
                z[i] += Complex64::new(radius * 1e-3, radius * 1e-3);
            }
        }
        if all_done {
            break;
        }
    }
    if !done.iter().all(|&d| d) {
        // Accept stragglers whose backward error is still small.
        let ok = z.iter().all(|&zi| {
            let (p, _) = eval_with_derivative(coeffs, zi);
            p.norm() <= 1e-8 * abs_poly(coeffs, zi.norm()).max(f64::MIN_POSITIVE)
        });
        if !ok {
            return Err(NumericError::NoConvergence);
        }
    }
    for zi in z.iter_mut() {
        *zi = newton_polish(coeffs, *zi, 3);
    }
    Ok(z)
}

/// A few Newton steps, keeping the iterate only while the residual shrinks.
pub fn newton_polish(coeffs: &[Complex64], mut z: Complex64, steps: usize) -> Complex64 {
    let (mut p, mut dp) = eval_with_derivative(coeffs, z);
    for _ in 0..steps {
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        let (np, ndp) = eval_with_derivative(coeffs, next);
        if np.norm() < p.norm() {
            z = next;
            p = np;
            dp = ndp;
        } else {
            break;
        }
    }
    z
}

/// Roots of a polynomial given with possibly-negligible leading terms.
pub fn roots_trimmed(coeffs: &[Complex64], seed: u64) -> Result<Vec<Complex64>, NumericError> {
    let c = trim_leading(coeffs, 1e-13);
    if c.is_empty() {
        return Err(NumericError::InvalidArgument("zero polynomial has no isolated roots".into()));
    }
    aberth(&c, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn contains(roots: &[Complex64], z: Complex64, tol: f64) -> bool {
        roots.iter().any(|r| (r - z).norm() < tol)
    }

    #[test]
    fn quadratic_unit_roots() {
        // z^2 - z + 1
        let roots = aberth(&[c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)], 7).unwrap();
        let w = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
        assert!(contains(&roots, w, 1e-14));
        assert!(contains(&roots, w.conj(), 1e-14));
    }

    #[test]
    fn wilkinson_like() {
        let mut coeffs = vec![c(1.0, 0.0)];
        for k in 1..=10 {
            // multiply by (z - k)
            let mut next = vec![Complex64::zero(); coeffs.len() + 1];
            for (i, a) in coeffs.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * k as f64;
            }
            coeffs = next;
        }
        let roots = aberth(&coeffs, 1).unwrap();
        for k in 1..=10 {
            assert!(contains(&roots, c(k as f64, 0.0), 1e-6), "missing {k}");
        }
    }

    #[test]
    fn double_root_terminates() {
        // (z - 1)^2 (z + 2)
        let roots = aberth(&[c(2.0, 0.0), c(-3.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 3).unwrap();
        assert!(contains(&roots, c(-2.0, 0.0), 1e-10));
        assert_eq!(roots.iter().filter(|r| (*r - c(1.0, 0.0)).norm() < 1e-6).count(), 2);
    }

    #[test]
    fn zero_leading_rejected() {
        assert!(aberth(&[c(1.0, 0.0), c(0.0, 0.0)], 0).is_err());
        let r = roots_trimmed(&[c(-2.0, 0.0), c(1.0, 0.0), c(1e-20, 0.0)], 0).unwrap();
        assert_eq!(r.len(), 1);
    }
}
