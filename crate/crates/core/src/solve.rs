//! Floating-point solvers on bivariate polynomial systems: isolated
//! solutions by numeric elimination, and Levenberg–Marquardt searches for
//! points of a curve `{q = 0}` with prescribed moduli `|p_k| = rho_k`.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::NumericError;
use crate::numpoly::NumPoly;
use crate::roots;

/// A point of C^2.
pub type CPoint = [Complex64; 2];

/// Serde adapters rendering complex points as `[[re, im], [re, im]]`.
pub mod serde_point {
    use super::CPoint;
    use serde::ser::{SerializeSeq, Serializer};

    pub fn serialize<S: Serializer>(p: &CPoint, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        for z in p {
            seq.serialize_element(&[z.re, z.im])?;
        }
        seq.end()
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(p: &Option<CPoint>, s: S) -> Result<S::Ok, S::Error> {
            match p {
                Some(p) => super::serialize(p, s),
                None => s.serialize_none(),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Solution {
    pub point: CPoint,
    /// `max(|f|, |g|)` at the point.
    pub residual: f64,
}

fn sylvester_det(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut mat = DMatrix::<Complex64>::zeros(size, size);
    for i in 0..n {
        for (k, c) in a.iter().enumerate() {
            mat[(i, i + m - k)] = *c;
        }
    }
    for i in 0..m {
        for (k, c) in b.iter().enumerate() {
            mat[(n + i, i + n - k)] = *c;
        }
    }
    mat.determinant()
}

/// Coefficients (ascending in `z1`) of `Res_{z2}(f, g)` computed by
/// evaluating the Sylvester determinant on a circle and interpolating.
pub fn numeric_resultant_z2(f: &NumPoly, g: &NumPoly) -> Vec<Complex64> {
    let m = f.deg_z2();
    let n = g.deg_z2();
    let bound = n * f.deg_z1() + m * g.deg_z1();
    let count = bound + 1;
    let values: Vec<Complex64> = (0..count)
        .map(|k| {
            let z = Complex64::from_polar(1.0, TAU * k as f64 / count as f64);
            sylvester_det(&f.restrict_z1(z), &g.restrict_z1(z))
        })
        .collect();
    (0..count)
        .map(|j| {
            let mut acc = Complex64::zero();
            for (k, v) in values.iter().enumerate() {
                acc += v * Complex64::from_polar(1.0, -TAU * (j * k) as f64 / count as f64);
            }
            acc / count as f64
        })
        .collect()
}

fn residual(f: &NumPoly, g: &NumPoly, p: CPoint) -> f64 {
    f.eval(p[0], p[1]).norm().max(g.eval(p[0], p[1]).norm())
}

/// Newton iteration on the square system `f = g = 0`.
pub fn newton_polish_system(f: &NumPoly, g: &NumPoly, start: CPoint, steps: usize) -> CPoint {
    let mut p = start;
    let mut r = residual(f, g, p);
    for _ in 0..steps {
        if r == 0.0 {
            break;
        }
        let (fv, f1, f2) = f.eval_grad(p[0], p[1]);
        let (gv, g1, g2) = g.eval_grad(p[0], p[1]);
        let jac = Matrix2::new(f1, f2, g1, g2);
        let Some(inv) = jac.try_inverse() else { break };
        let step = inv * Vector2::new(-fv, -gv);
        let next = [p[0] + step[0], p[1] + step[1]];
        let nr = residual(f, g, next);
        if nr < r {
            p = next;
            r = nr;
        } else {
            break;
        }
    }
    p
}

fn trimmed_degree(c: &[Complex64]) -> Vec<Complex64> {
    roots::trim_leading(c, 1e-11)
}

/// All isolated common zeros of `f` and `g`, each polished by Newton.
pub fn solve_system(f: &NumPoly, g: &NumPoly, seed: u64) -> Result<Vec<Solution>, NumericError> {
    let (m, n) = (f.deg_z2(), g.deg_z2());
    let candidates: Vec<CPoint> = if m == 0 && n == 0 {
        return Err(NumericError::InvalidArgument("system does not involve z2".into()));
    } else if m == 0 || n == 0 {
        let (uni, other) = if m == 0 { (f, g) } else { (g, f) };
        let z1s = roots::roots_trimmed(&uni.restrict_z2(Complex64::zero()), seed)?;
        let mut out = Vec::new();
        for z1 in z1s {
            let c = trimmed_degree(&other.restrict_z1(z1));
            if c.is_empty() {
                return Err(NumericError::SamplingFailed("non-isolated solution set".into()));
            }
            for z2 in roots::aberth(&c, seed)? {
                out.push([z1, z2]);
            }
        }
        out
    } else {
        let res = trimmed_degree(&numeric_resultant_z2(f, g));
        if res.is_empty() {
            return Err(NumericError::ResultantDegenerate);
        }
        let z1s = roots::aberth(&res, seed)?;
        let mut out = Vec::new();
        for z1 in z1s {
            let a = trimmed_degree(&f.restrict_z1(z1));
            let b = trimmed_degree(&g.restrict_z1(z1));
            let (solve_with, check_with) = match (a.len() > 1, b.len() > 1) {
                (true, true) if a.len() <= b.len() => (a, g),
                (true, true) => (b, f),
                (true, false) => (a, g),
                (false, true) => (b, f),
                (false, false) => continue,
            };
            let z2s = roots::aberth(&solve_with, seed)?;
            let scale = check_with.coeff_norm().max(1.0);
            let mut best: Option<(f64, Complex64)> = None;
            for z2 in z2s {
                let r = check_with.eval(z1, z2).norm();
                if r <= 1e-5 * scale * (1.0 + z1.norm() + z2.norm()).powi(4) {
                    out.push([z1, z2]);
                }
                if best.map_or(true, |(br, _)| r < br) {
                    best = Some((r, z2));
                }
            }
            // keep the best candidate even when it misses the relative gate
            if let Some((_, z2)) = best {
                out.push([z1, z2]);
            }
        }
        out
    };
    let mut sols: Vec<Solution> = Vec::new();
    for c in candidates {
        let p = newton_polish_system(f, g, c, 12);
        let r = residual(f, g, p);
        let scale = f.coeff_norm().max(g.coeff_norm()).max(1.0);
        if r > 1e-7 * scale {
            continue;
        }
        let dup = sols.iter().any(|s| {
            (s.point[0] - p[0]).norm() + (s.point[1] - p[1]).norm() < 1e-7 * (1.0 + p[0].norm() + p[1].norm())
        });
        if !dup {
            sols.push(Solution { point: p, residual: r });
        }
    }
    Ok(sols)
}

/// A modulus constraint `|poly(z)| = modulus`.
#[derive(Clone, Debug)]
pub struct ModulusTarget {
    pub poly: NumPoly,
    pub modulus: f64,
}

/// Residual used to accept witnesses: the largest of `|q(z)|` and the
/// modulus defects `||p_k(z)| - rho_k|`.
pub fn constraint_residual(q: &NumPoly, targets: &[ModulusTarget], p: CPoint) -> f64 {
    targets
        .iter()
        .map(|t| (t.poly.eval(p[0], p[1]).norm() - t.modulus).abs())
        .fold(q.eval(p[0], p[1]).norm(), f64::max)
}

fn lm_residuals(q: &NumPoly, targets: &[ModulusTarget], p: CPoint) -> (DVector<f64>, DMatrix<f64>) {
    let rows = 2 + targets.len();
    let mut r = DVector::zeros(rows);
    let mut jac = DMatrix::zeros(rows, 4);
    let (qv, q1, q2) = q.eval_grad(p[0], p[1]);
    r[0] = qv.re;
    r[1] = qv.im;
    for (k, d) in [q1, q2].into_iter().enumerate() {
        jac[(0, 2 * k)] = d.re;
        jac[(0, 2 * k + 1)] = -d.im;
        jac[(1, 2 * k)] = d.im;
        jac[(1, 2 * k + 1)] = d.re;
    }
    for (t_idx, t) in targets.iter().enumerate() {
        let row = 2 + t_idx;
        let (v, d1, d2) = t.poly.eval_grad(p[0], p[1]);
        r[row] = v.norm_sqr() - t.modulus * t.modulus;
        for (k, d) in [d1, d2].into_iter().enumerate() {
            let w = v.conj() * d;
            jac[(row, 2 * k)] = 2.0 * w.re;
            jac[(row, 2 * k + 1)] = -2.0 * w.im;
        }
    }
    (r, jac)
}

/// Levenberg–Marquardt on `q = 0`, `|p_k|^2 = rho_k^2` in the four real
/// coordinates of C^2. Returns the final point and its
/// [`constraint_residual`].
pub fn levenberg_marquardt(
    q: &NumPoly,
    targets: &[ModulusTarget],
    start: CPoint,
    max_iter: usize,
) -> (CPoint, f64) {
    let mut p = start;
    let (mut r, mut jac) = lm_residuals(q, targets, p);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    for _ in 0..max_iter {
        if cost < 1e-30 {
            break;
        }
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let g = &jt * &r;
        let mut a = jtj.clone();
        for i in 0..4 {
            a[(i, i)] += lambda * (1.0 + jtj[(i, i)]);
        }
        let Some(step) = a.lu().solve(&(-g)) else {
            lambda *= 10.0;
            continue;
        };
        let next = [
            p[0] + Complex64::new(step[0], step[1]),
            p[1] + Complex64::new(step[2], step[3]),
        ];
        let (nr, njac) = lm_residuals(q, targets, next);
        let ncost = nr.norm_squared();
        if ncost.is_finite() && ncost < cost {
            p = next;
            r = nr;
            jac = njac;
            cost = ncost;
            lambda = (lambda / 3.0).max(1e-15);
        } else {
            lambda *= 4.0;
            if lambda > 1e12 {
                break;
            }
        }
    }
    (p, constraint_residual(q, targets, p))
}

/// Random points on `{q = 0}`: draw one coordinate uniformly from discs of
/// the given radii and solve for the other.
pub fn sample_curve(q: &NumPoly, radii: &[f64], count: usize, seed: u64) -> Vec<CPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let solve_for_z2 = q.deg_z2() > 0;
    if q.deg_z1() == 0 && q.deg_z2() == 0 {
        return out;
    }
    let mut attempts = 0;
    while out.len() < count && attempts < 4 * count + 16 {
        attempts += 1;
        let radius = radii[attempts % radii.len()];
        let t = Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU));
        let coeffs = if solve_for_z2 { q.restrict_z1(t) } else { q.restrict_z2(t) };
        let c = roots::trim_leading(&coeffs, 1e-12);
        if c.len() < 2 {
            continue;
        }
        if let Ok(rs) = roots::aberth(&c, rng.gen()) {
            for s in rs {
                out.push(if solve_for_z2 { [t, s] } else { [s, t] });
            }
        }
    }
    out.truncate(count);
    out
}

/// Searches `{q = 0}` for a point satisfying all modulus targets within
/// `tol`. Starting points are curve samples ranked by residual.
pub fn find_on_curve(
    q: &NumPoly,
    targets: &[ModulusTarget],
    radii: &[f64],
    tol: f64,
    seed: u64,
) -> Option<(CPoint, f64)> {
    let mut starts = sample_curve(q, radii, 256, seed);
    starts.sort_by(|a, b| {
        constraint_residual(q, targets, *a)
            .partial_cmp(&constraint_residual(q, targets, *b))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut best: Option<(CPoint, f64)> = None;
    for s in starts.into_iter().take(24) {
        let (p, r) = levenberg_marquardt(q, targets, s, 200);
        if !r.is_finite() {
            continue;
        }
        if best.map_or(true, |(_, br)| r < br) {
            best = Some((p, r));
        }
        if r <= tol {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::BiPoly;

    fn np(terms: &[(i64, u32, u32)]) -> NumPoly {
        NumPoly::from_bipoly(&BiPoly::from_int_terms(terms))
    }

    #[test]
    fn resultant_interpolation_matches_exact() {
        // Res_z2(z1+z2 - 1, z1*z2 - 1) = z1*(1 - z1) - 1 = -z1^2 + z1 - 1
        let f = np(&[(1, 1, 0), (1, 0, 1), (-1, 0, 0)]);
        let g = np(&[(1, 1, 1), (-1, 0, 0)]);
        let r = numeric_resultant_z2(&f, &g);
        let expect = [-1.0, 1.0, -1.0];
        for (c, e) in r.iter().zip(expect) {
            assert!((c - Complex64::new(e, 0.0)).norm() < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn solves_linear_quadratic() {
        // 2z1 + z2^2 = 1, z1 - z2^2 = -1  =>  z1 = 0, z2 = +-1
        let f = np(&[(2, 1, 0), (1, 0, 2), (-1, 0, 0)]);
        let g = np(&[(1, 1, 0), (-1, 0, 2), (1, 0, 0)]);
        let sols = solve_system(&f, &g, 1).unwrap();
        assert_eq!(sols.len(), 2);
        for s in sols {
            assert!(s.point[0].norm() < 1e-12);
            assert!((s.point[1].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn univariate_member() {
        // z1 = 1, z2 = 1
        let f = np(&[(1, 1, 0), (-1, 0, 0)]);
        let g = np(&[(1, 0, 1), (-1, 0, 0)]);
        let sols = solve_system(&f, &g, 1).unwrap();
        assert_eq!(sols.len(), 1);
        assert!((sols[0].point[0] - 1.0).norm() < 1e-14);
    }

    #[test]
    fn lm_finds_torus_point_on_line() {
        // q = z1 - z2 with |z1| = 1, |z2| = 1: any point of the diagonal circle.
        let q = np(&[(1, 1, 0), (-1, 0, 1)]);
        let targets = vec![
            ModulusTarget { poly: np(&[(1, 1, 0)]), modulus: 1.0 },
            ModulusTarget { poly: np(&[(1, 0, 1)]), modulus: 1.0 },
        ];
        let (p, r) = find_on_curve(&q, &targets, &[0.5, 2.0], 1e-12, 3).unwrap();
        assert!(r < 1e-12);
        assert!((p[0].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lm_reports_failure_when_empty() {
        // z2 = 0 with |2 z1| = 1 and |z1| = 1 is empty.
        let q = np(&[(1, 0, 1)]);
        let targets = vec![
            ModulusTarget { poly: np(&[(2, 1, 0)]), modulus: 1.0 },
            ModulusTarget { poly: np(&[(1, 1, 0)]), modulus: 1.0 },
        ];
        let (_, r) = find_on_curve(&q, &targets, &[0.5, 2.0], 1e-9, 3).unwrap();
        assert!(r > 0.1);
    }
}
