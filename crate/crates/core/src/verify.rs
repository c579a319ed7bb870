//! Floating-point oracles that corroborate the exact pipeline.
//!
//! Everything here is evidence, not proof: the Δ cross-check evaluates the
//! determinant product directly from contour-integral derivatives and an
//! independent evaluation of `h`, and the separation search looks for a
//! polynomial that is small on a sampled graph and equal to one at a probe.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::NumericError;
use crate::factor::FactorList;
use crate::hull::{delta_numerator, ProblemSpec};
use crate::numpoly::NumPoly;
use crate::solve::{self, CPoint};

/// Separation requires `|H(point)| > SEPARATION_FACTOR * sup |H|` on the cloud.
pub const SEPARATION_FACTOR: f64 = 1.05;

/// A point `(z1, z2, w)` of C^3.
pub type GraphPoint = [Complex64; 3];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResidualStats {
    pub max: f64,
    pub mean: f64,
    pub count: usize,
}

/// Numeric evaluators for `P`, `P∘Ψ` and `h`, with `h` computed as
/// `conj(P(1/conj(w1), 1/conj(w2)))` rather than from `K`.
struct Evaluators {
    p1: NumPoly,
    p2: NumPoly,
    data: NumPoly,
}

impl Evaluators {
    fn new(spec: &ProblemSpec) -> Self {
        Self {
            p1: NumPoly::from_bipoly(&spec.p1),
            p2: NumPoly::from_bipoly(&spec.p2),
            data: NumPoly::from_bipoly(&spec.data),
        }
    }

    fn psi(&self, z: CPoint) -> CPoint {
        [self.p1.eval(z[0], z[1]), self.p2.eval(z[0], z[1])]
    }

    fn h(&self, w: CPoint) -> Complex64 {
        self.data.eval(1.0 / w[0].conj(), 1.0 / w[1].conj()).conj()
    }

    fn relation_residual(&self, z: CPoint) -> f64 {
        let w = self.psi(z);
        (self.data.eval(w[0], w[1]).conj() - self.h(w)).norm()
    }
}

/// `max` and `mean` of `|conj(P∘Ψ) − h∘Ψ|` over the samples.
pub fn verify_boundary_relation(spec: &ProblemSpec, samples: &[CPoint]) -> Result<ResidualStats, NumericError> {
    if samples.is_empty() {
        return Err(NumericError::EmptySampleSet);
    }
    let ev = Evaluators::new(spec);
    let values: Vec<f64> = samples.iter().map(|z| ev.relation_residual(*z)).collect();
    Ok(ResidualStats {
        max: values.iter().copied().fold(0.0, f64::max),
        mean: values.iter().sum::<f64>() / values.len() as f64,
        count: values.len(),
    })
}

/// Derivative of `f` at `x` from the trapezoidal rule on a circle of the
/// given radius; exact up to rounding for polynomials of degree `< nodes`.
fn contour_derivative(f: impl Fn(Complex64) -> Complex64, x: Complex64, radius: f64, nodes: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..nodes {
        let e = Complex64::from_polar(1.0, TAU * k as f64 / nodes as f64);
        acc += f(x + radius * e) / e;
    }
    acc / (nodes as f64 * radius)
}

/// `Δ(z)` as the product of the 2×2 determinants `[∂P(Ψ), ∂h(Ψ)]` and
/// `Jac Ψ`, each entry differentiated numerically.
pub fn delta_direct(spec: &ProblemSpec, z: CPoint) -> Complex64 {
    let ev = Evaluators::new(spec);
    let w = ev.psi(z);
    let nodes = 64;
    let rp = 0.5 * (1.0 + w[0].norm().max(w[1].norm()));
    let rh = 0.25 * w[0].norm().min(w[1].norm());
    let p_w1 = contour_derivative(|t| ev.data.eval(t, w[1]), w[0], rp, nodes);
    let p_w2 = contour_derivative(|t| ev.data.eval(w[0], t), w[1], rp, nodes);
    let h_w1 = contour_derivative(|t| ev.h([t, w[1]]), w[0], rh, nodes);
    let h_w2 = contour_derivative(|t| ev.h([w[0], t]), w[1], rh, nodes);
    let rz = 0.5 * (1.0 + z[0].norm().max(z[1].norm()));
    let a = contour_derivative(|t| ev.p1.eval(t, z[1]), z[0], rz, nodes);
    let b = contour_derivative(|t| ev.p1.eval(z[0], t), z[1], rz, nodes);
    let c = contour_derivative(|t| ev.p2.eval(t, z[1]), z[0], rz, nodes);
    let d = contour_derivative(|t| ev.p2.eval(z[0], t), z[1], rz, nodes);
    (p_w1 * h_w2 - p_w2 * h_w1) * (a * d - b * c)
}

/// Maximum over random points of `|N/(p1^{m+1} p2^{n+1}) − Δ| / (1 + |Δ|)`,
/// sampling only where `|p1 p2| > 0.1`.
pub fn cross_check_delta(spec: &ProblemSpec, trials: usize, seed: u64) -> Result<f64, NumericError> {
    if trials == 0 {
        return Err(NumericError::InvalidArgument("trials must be positive".into()));
    }
    let ev = Evaluators::new(spec);
    let n = NumPoly::from_bipoly(&delta_numerator(spec));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    let mut attempts = 0;
    while done < trials {
        attempts += 1;
        if attempts > 1000 * trials {
            return Err(NumericError::SamplingFailed("no points with |p1 p2| > 0.1".into()));
        }
        let z = [
            Complex64::from_polar(1.5 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU)),
            Complex64::from_polar(1.5 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU)),
        ];
        let w = ev.psi(z);
        if (w[0] * w[1]).norm() <= 0.1 {
            continue;
        }
        let lhs = n.eval(z[0], z[1]) / (w[0].powu(spec.m + 1) * w[1].powu(spec.n + 1));
        let rhs = delta_direct(spec, z);
        worst = worst.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
        done += 1;
    }
    Ok(worst)
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanEntry {
    #[serde(with = "solve::serde_point")]
    pub point: CPoint,
    pub delta_abs: f64,
    /// Rendered factor of `N` vanishing at the point, if any.
    pub on_factor: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TotallyRealScan {
    pub evaluated: usize,
    /// Samples with `|Δ| ≤ tol`: candidate points where `X` is not totally real.
    pub sigma_points: Vec<ScanEntry>,
}

/// Evaluates Δ at each sample of `X` and cross-references the small values
/// against the factor varieties of the Δ numerator.
pub fn totally_real_scan(spec: &ProblemSpec, x_samples: &[CPoint], factors: Option<&FactorList>, tol: f64) -> TotallyRealScan {
    let factor_evals: Vec<(String, NumPoly)> = factors
        .map(|f| f.polys().map(|p| (p.to_string(), NumPoly::from_bipoly(p))).collect())
        .unwrap_or_default();
    let n = NumPoly::from_bipoly(&delta_numerator(spec));
    let ev = Evaluators::new(spec);
    let mut out = TotallyRealScan { evaluated: x_samples.len(), sigma_points: Vec::new() };
    for z in x_samples {
        let w = ev.psi(*z);
        let delta = n.eval(z[0], z[1]) / (w[0].powu(spec.m + 1) * w[1].powu(spec.n + 1));
        if delta.norm() <= tol {
            let on_factor = factor_evals
                .iter()
                .find(|(_, f)| f.eval(z[0], z[1]).norm() <= tol.max(1e-9))
                .map(|(s, _)| s.clone());
            out.sigma_points.push(ScanEntry { point: *z, delta_abs: delta.norm(), on_factor });
        }
    }
    out
}

/// Points of `{q = 0}` with `|p_i| ≤ 1` and `|p1 p2| ≥ margin`.
pub fn sample_variety_in_polyhedron(spec: &ProblemSpec, q: &crate::poly::BiPoly, count: usize, margin: f64, seed: u64) -> Vec<CPoint> {
    let ev = Evaluators::new(spec);
    let nq = NumPoly::from_bipoly(q);
    let mut out = Vec::new();
    let mut round = 0;
    while out.len() < count && round < 16 {
        for z in solve::sample_curve(&nq, &[0.25, 0.5, 1.0, 2.0], 4 * count, seed.wrapping_add(round)) {
            let w = ev.psi(z);
            if w[0].norm() <= 1.0 && w[1].norm() <= 1.0 && (w[0] * w[1]).norm() >= margin {
                out.push(z);
            }
        }
        round += 1;
    }
    out.truncate(count);
    out
}

/// Graph points `(z, conj((P∘Ψ)(z)))`.
pub fn graph_points(spec: &ProblemSpec, zs: &[CPoint]) -> Vec<GraphPoint> {
    let ev = Evaluators::new(spec);
    zs.iter()
        .map(|z| {
            let w = ev.psi(*z);
            [z[0], z[1], ev.data.eval(w[0], w[1]).conj()]
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SeparationCertificate {
    pub degree: u32,
    /// Exponents `(a, b, c)` of `z1^a z2^b w^c`, in the scaled coordinates
    /// `(x − center) / scale`.
    pub exponents: Vec<[u32; 3]>,
    pub coefficients: Vec<[f64; 2]>,
    pub center: [[f64; 2]; 3],
    pub scale: f64,
    pub value_at_point: [f64; 2],
    pub sup_on_cloud: f64,
    pub threshold_factor: f64,
    pub separated: bool,
}

fn exponents_up_to(degree: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for d in 0..=degree {
        for a in (0..=d).rev() {
            for b in (0..=d - a).rev() {
                out.push([a, b, d - a - b]);
            }
        }
    }
    out
}

fn monomial_row(p: &GraphPoint, exps: &[[u32; 3]], degree: u32) -> Vec<Complex64> {
    let powers: Vec<Vec<Complex64>> = p
        .iter()
        .map(|x| {
            let mut v = vec![Complex64::new(1.0, 0.0)];
            for k in 0..degree as usize {
                v.push(v[k] * x);
            }
            v
        })
        .collect();
    exps.iter()
        .map(|e| powers[0][e[0] as usize] * powers[1][e[1] as usize] * powers[2][e[2] as usize])
        .collect()
}

/// Least-squares search for `H` of total degree `≤ degree` with `H ≈ 0` on
/// the cloud and `H(point) = 1`: minimizes `Σ|H|² + λ‖a‖²` subject to the
/// point constraint, i.e. `a = G⁻¹ū / (uᵀ G⁻¹ ū)` with `G = A*A + λI`.
pub fn separation_search(cloud: &[GraphPoint], point: GraphPoint, degree: u32) -> Result<SeparationCertificate, NumericError> {
    if cloud.is_empty() {
        return Err(NumericError::EmptySampleSet);
    }
    if degree == 0 {
        return Err(NumericError::InvalidArgument("degree must be positive".into()));
    }
    let count = cloud.len() as f64;
    let mut center = [Complex64::new(0.0, 0.0); 3];
    for p in cloud {
        for k in 0..3 {
            center[k] += p[k] / count;
        }
    }
    let rms = (cloud
        .iter()
        .map(|p| (0..3).map(|k| (p[k] - center[k]).norm_sqr()).sum::<f64>())
        .sum::<f64>()
        / count)
        .sqrt();
    let scale = if rms > 0.0 { rms } else { 1.0 };
    let normalize = |p: &GraphPoint| -> GraphPoint {
        [(p[0] - center[0]) / scale, (p[1] - center[1]) / scale, (p[2] - center[2]) / scale]
    };

    let exps = exponents_up_to(degree);
    let k = exps.len();
    let rows: Vec<Vec<Complex64>> = cloud.iter().map(|p| monomial_row(&normalize(p), &exps, degree)).collect();
    let a = DMatrix::from_fn(rows.len(), k, |i, j| rows[i][j]);
    let mut g = a.adjoint() * &a;
    let max_diag = (0..k).map(|i| g[(i, i)].re).fold(0.0, f64::max);
    let lambda = 1e-12 * max_diag.max(1e-300);
    for i in 0..k {
        g[(i, i)] += lambda;
    }
    let u = DVector::from_vec(monomial_row(&normalize(&point), &exps, degree));
    let chol = g.cholesky().ok_or(NumericError::IllConditioned)?;
    let y = chol.solve(&u.map(|c| c.conj()));
    let denom = u.transpose() * &y;
    let denom = denom[(0, 0)];
    if !denom.norm().is_finite() || denom.norm() == 0.0 {
        return Err(NumericError::IllConditioned);
    }
    let coeffs = y / denom;
    let on_cloud = &a * &coeffs;
    let sup = on_cloud.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let value = (u.transpose() * &coeffs)[(0, 0)];
    if !sup.is_finite() || !value.norm().is_finite() {
        return Err(NumericError::IllConditioned);
    }
    Ok(SeparationCertificate {
        degree,
        exponents: exps,
        coefficients: coeffs.iter().map(|c| [c.re, c.im]).collect(),
        center: [[center[0].re, center[0].im], [center[1].re, center[1].im], [center[2].re, center[2].im]],
        scale,
        value_at_point: [value.re, value.im],
        sup_on_cloud: sup,
        threshold_factor: SEPARATION_FACTOR,
        separated: value.norm() > SEPARATION_FACTOR * sup,
    })
}
