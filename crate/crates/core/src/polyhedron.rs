//! Hypothesis checks on the defining pair `(p1, p2)` of a polynomial
//! polyhedron `{|p1| < 1, |p2| < 1}`, and sampling of its distinguished
//! boundary `Γ = {|p1| = 1, |p2| = 1}` by solving torus fibers.

use std::f64::consts::TAU;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{HullError, NumericError};
use crate::factor;
use crate::gcd;
use crate::numpoly::NumPoly;
use crate::poly::{BiPoly, Var};
use crate::solve::{self, CPoint, ModulusTarget};

/// Largest deviation `||p_i(z)| - 1|` accepted for a point of Γ.
pub const GAMMA_TOL: f64 = 1e-8;
/// Largest residual accepted for a fiber root.
pub const FIBER_TOL: f64 = 1e-10;
/// A Γ witness found by the constrained search must meet this residual.
pub const WITNESS_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedronSpec {
    pub p1: BiPoly,
    pub p2: BiPoly,
}

impl PolyhedronSpec {
    pub fn new(p1: BiPoly, p2: BiPoly) -> Result<Self, HullError> {
        if p1.is_constant() || p2.is_constant() {
            return Err(HullError::InvalidSpec("p1 and p2 must be non-constant".into()));
        }
        Ok(Self { p1, p2 })
    }

    /// Jacobian determinant `W = ∂1p1·∂2p2 − ∂2p1·∂1p2`.
    pub fn jacobian(&self) -> BiPoly {
        let a = self.p1.partial_derivative(Var::Z1);
        let b = self.p1.partial_derivative(Var::Z2);
        let c = self.p2.partial_derivative(Var::Z1);
        let d = self.p2.partial_derivative(Var::Z2);
        &(&a * &d) - &(&b * &c)
    }

    fn unit_targets(&self) -> Vec<ModulusTarget> {
        vec![
            ModulusTarget { poly: NumPoly::from_bipoly(&self.p1), modulus: 1.0 },
            ModulusTarget { poly: NumPoly::from_bipoly(&self.p2), modulus: 1.0 },
        ]
    }

    /// `max(||p1(z)| - 1|, ||p2(z)| - 1|)`.
    pub fn gamma_defect(&self, z: CPoint) -> f64 {
        let a = self.p1.evaluate(z[0], z[1]).norm();
        let b = self.p2.evaluate(z[0], z[1]).norm();
        (a - 1.0).abs().max((b - 1.0).abs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    Exact,
    Sampled,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    #[serde(with = "solve::serde_point")]
    pub point: CPoint,
    pub residual: f64,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub name: String,
    pub verdict: Verdict,
    pub method: Method,
    pub witnesses: Vec<Witness>,
    pub detail: String,
    /// Smallest `|W|` seen on Γ samples, for the non-degeneracy check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed_min: Option<f64>,
}

impl CheckReport {
    fn new(name: &str, verdict: Verdict, method: Method, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            verdict,
            method,
            witnesses: Vec::new(),
            detail: detail.into(),
            observed_min: None,
        }
    }
}

/// Points where `p` has vanishing gradient and `|p| = 1`, if any.
fn critical_points_on_unit_level(p: &BiPoly, seed: u64) -> Result<Vec<Witness>, HullError> {
    let d1 = p.partial_derivative(Var::Z1);
    let d2 = p.partial_derivative(Var::Z2);
    // A nonzero constant partial means no critical points at all.
    if (d1.is_constant() && !d1.is_zero()) || (d2.is_constant() && !d2.is_zero()) {
        return Ok(Vec::new());
    }
    let np = NumPoly::from_bipoly(p);
    let mut candidates: Vec<CPoint> = Vec::new();
    let (g, c1, c2) = if d1.is_zero() || d2.is_zero() {
        let g = if d1.is_zero() { d2.clone() } else { d1.clone() };
        (g, BiPoly::one(), BiPoly::one())
    } else {
        let g = gcd::gcd(&d1, &d2)?;
        let c1 = d1.divide_exact(&g)?;
        let c2 = d2.divide_exact(&g)?;
        (g, c1, c2)
    };
    // p is constant along every irreducible curve of critical points.
    if !g.is_constant() {
        for (i, f) in factor::factor_irreducible(&g)?.polys().into_iter().enumerate() {
            let pts = solve::sample_curve(&NumPoly::from_bipoly(f), &[1.0, 3.0], 1, seed + i as u64);
            candidates.extend(pts);
        }
    }
    if !c1.is_constant() && !c2.is_constant() {
        let (a, b) = (NumPoly::from_bipoly(&c1), NumPoly::from_bipoly(&c2));
        let sols = match solve::solve_system(&a, &b, seed) {
            Err(NumericError::ResultantDegenerate) | Err(NumericError::InvalidArgument(_)) => {
                let (a, b) = (NumPoly::from_bipoly(&c1.swap_vars()), NumPoly::from_bipoly(&c2.swap_vars()));
                solve::solve_system(&a, &b, seed)?
                    .into_iter()
                    .map(|mut s| {
                        s.point.swap(0, 1);
                        s
                    })
                    .collect()
            }
            r => r?,
        };
        let (n1, n2) = (NumPoly::from_bipoly(&d1), NumPoly::from_bipoly(&d2));
        for s in sols {
            let z = s.point;
            if n1.eval(z[0], z[1]).norm().max(n2.eval(z[0], z[1]).norm()) <= 1e-8 {
                candidates.push(z);
            }
        }
    }
    Ok(candidates
        .into_iter()
        .filter_map(|z| {
            let r = (np.eval(z[0], z[1]).norm() - 1.0).abs();
            (r <= GAMMA_TOL).then(|| Witness { point: z, residual: r, note: "critical point on |p| = 1".into() })
        })
        .collect())
}

/// Complex non-degeneracy: `dp1 ≠ 0` on `{|p1| = 1}`, `dp2 ≠ 0` on
/// `{|p2| = 1}`, and `dp1 ∧ dp2 ≠ 0` on Γ. The first two are decided from the
/// finitely many critical values; the wedge condition is searched for on
/// each irreducible factor of `W` and scanned over a `samples × samples`
/// grid of torus fibers. Pass therefore means "no counterexample found".
pub fn check_nondegeneracy(spec: &PolyhedronSpec, samples: usize, seed: u64) -> Result<CheckReport, HullError> {
    if samples == 0 {
        return Err(NumericError::InvalidArgument("samples must be positive".into()).into());
    }
    let name = "nondegeneracy";
    for (label, p) in [("p1", &spec.p1), ("p2", &spec.p2)] {
        let ws = critical_points_on_unit_level(p, seed)?;
        if !ws.is_empty() {
            let mut r = CheckReport::new(name, Verdict::Fail, Method::Exact, format!("d{label} vanishes on |{label}| = 1"));
            r.witnesses = ws;
            return Ok(r);
        }
    }
    let w = spec.jacobian();
    if w.is_zero() {
        let mut r = CheckReport::new(name, Verdict::Fail, Method::Exact, "dp1 ∧ dp2 vanishes identically");
        if let Ok(g) = sample_gamma(spec, 2, 2, seed) {
            r.witnesses = g
                .points
                .into_iter()
                .take(1)
                .map(|p| Witness { point: p.point, residual: p.residual, note: "W ≡ 0".into() })
                .collect();
        }
        return Ok(r);
    }
    let targets = spec.unit_targets();
    if !w.is_constant() {
        for (i, f) in factor::factor_irreducible(&w)?.polys().into_iter().enumerate() {
            let q = NumPoly::from_bipoly(f);
            if let Some((z, res)) =
                solve::find_on_curve(&q, &targets, &[0.5, 1.0, 2.0, 4.0], WITNESS_TOL * 1e-3, seed.wrapping_add(i as u64))
            {
                if res <= WITNESS_TOL {
                    let mut r = CheckReport::new(
                        name,
                        Verdict::Fail,
                        Method::Sampled,
                        format!("dp1 ∧ dp2 vanishes on Γ along {f} = 0"),
                    );
                    r.witnesses.push(Witness { point: z, residual: res, note: format!("{f} = 0 on Γ") });
                    return Ok(r);
                }
            }
        }
    }
    let nw = NumPoly::from_bipoly(&w);
    let cloud = sample_gamma(spec, samples, samples, seed)?;
    let min = cloud
        .points
        .iter()
        .map(|p| nw.eval(p.point[0], p.point[1]).norm())
        .fold(f64::INFINITY, f64::min);
    let mut r = CheckReport::new(
        name,
        Verdict::Pass,
        Method::Sampled,
        format!("no zero of W on Γ found; {} Γ samples", cloud.points.len()),
    );
    r.observed_min = min.is_finite().then_some(min);
    Ok(r)
}

fn gcd_witness(g: &BiPoly, seed: u64) -> Option<Witness> {
    let pts = solve::sample_curve(&NumPoly::from_bipoly(g), &[1.0], 1, seed);
    pts.first()
        .map(|z| Witness { point: *z, residual: g.evaluate(z[0], z[1]).norm(), note: "common zero".into() })
}

/// Properness of `Ψ = (p1, p2)`. Homogeneous pairs are decided exactly: a
/// common zero off the origin exists iff the pair shares a factor. For other
/// pairs, the (weighted) top forms having only the origin as common zero is
/// a sufficient condition.
pub fn check_properness(spec: &PolyhedronSpec, seed: u64) -> Result<CheckReport, HullError> {
    let name = "properness";
    if spec.p1.is_homogeneous() && spec.p2.is_homogeneous() {
        let g = gcd::gcd(&spec.p1, &spec.p2)?;
        if g.is_constant() {
            return Ok(CheckReport::new(name, Verdict::Pass, Method::Exact, "homogeneous; only common zero is the origin"));
        }
        let mut r = CheckReport::new(name, Verdict::Fail, Method::Exact, format!("common factor {g}"));
        r.witnesses.extend(gcd_witness(&g, seed));
        return Ok(r);
    }
    for a in 1..=4u32 {
        for b in 1..=4u32 {
            if num_integer::gcd(a, b) != 1 {
                continue;
            }
            let t1 = spec.p1.weighted_top_form(a, b);
            let t2 = spec.p2.weighted_top_form(a, b);
            if t1.is_constant() || t2.is_constant() {
                continue;
            }
            if gcd::gcd(&t1, &t2)?.is_constant() {
                let detail = if (a, b) == (1, 1) {
                    "top-degree forms have only the origin as common zero".to_string()
                } else {
                    format!("top forms for weights ({a}, {b}) have only the origin as common zero")
                };
                return Ok(CheckReport::new(name, Verdict::Pass, Method::Exact, detail));
            }
        }
    }
    Ok(CheckReport::new(
        name,
        Verdict::Inconclusive,
        Method::Exact,
        "not homogeneous and no weighted top-form certificate found",
    ))
}

/// Homogeneous polyhedra are star-shaped about the origin, hence contractible.
pub fn check_contractible_homogeneous(spec: &PolyhedronSpec, properness: Option<&CheckReport>) -> CheckReport {
    let name = "contractible";
    if spec.p1.is_homogeneous() && spec.p2.is_homogeneous() {
        let compact = properness.is_some_and(|r| r.verdict == Verdict::Pass);
        let detail = if compact {
            "homogeneous: star-shaped, contractible; closure compact by properness"
        } else {
            "homogeneous: star-shaped, contractible"
        };
        CheckReport::new(name, Verdict::Pass, Method::Exact, detail)
    } else {
        CheckReport::new(name, Verdict::Inconclusive, Method::Exact, "not homogeneous")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TorusFiber {
    pub theta: f64,
    pub phi: f64,
    #[serde(skip)]
    pub roots: Vec<CPoint>,
    pub residuals: Vec<f64>,
}

/// Solves `p1 = e^{iθ}`, `p2 = e^{iφ}`.
pub fn solve_fiber(spec: &PolyhedronSpec, theta: f64, phi: f64, seed: u64) -> Result<TorusFiber, NumericError> {
    let a = Complex64::from_polar(1.0, theta);
    let b = Complex64::from_polar(1.0, phi);
    let solve_in = |p1: &BiPoly, p2: &BiPoly| {
        let f = NumPoly::from_bipoly(p1).shifted(-a);
        let g = NumPoly::from_bipoly(p2).shifted(-b);
        solve::solve_system(&f, &g, seed)
    };
    let sols = match solve_in(&spec.p1, &spec.p2) {
        Ok(s) => s,
        Err(NumericError::ResultantDegenerate) | Err(NumericError::InvalidArgument(_)) => {
            solve_in(&spec.p1.swap_vars(), &spec.p2.swap_vars())?
                .into_iter()
                .map(|mut s| {
                    s.point.swap(0, 1);
                    s
                })
                .collect()
        }
        Err(e) => return Err(e),
    };
    let (roots, residuals) = sols
        .into_iter()
        .filter(|s| s.residual <= FIBER_TOL)
        .map(|s| (s.point, s.residual))
        .unzip();
    Ok(TorusFiber { theta, phi, roots, residuals })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GammaPoint {
    #[serde(with = "solve::serde_point")]
    pub point: CPoint,
    pub theta: f64,
    pub phi: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, Default)]
pub struct GammaSample {
    pub points: Vec<GammaPoint>,
    /// Grid nodes whose fiber solve failed, with the reason.
    pub failures: Vec<(f64, f64, String)>,
}

/// Union of torus fibers over a `grid_theta × grid_phi` grid.
pub fn sample_gamma(
    spec: &PolyhedronSpec,
    grid_theta: usize,
    grid_phi: usize,
    seed: u64,
) -> Result<GammaSample, NumericError> {
    if grid_theta == 0 || grid_phi == 0 {
        return Err(NumericError::InvalidArgument("grid sizes must be positive".into()));
    }
    let mut out = GammaSample::default();
    for i in 0..grid_theta {
        for j in 0..grid_phi {
            let theta = TAU * i as f64 / grid_theta as f64;
            let phi = TAU * j as f64 / grid_phi as f64;
            match solve_fiber(spec, theta, phi, seed) {
                Ok(f) => {
                    for (z, r) in f.roots.into_iter().zip(f.residuals) {
                        if spec.gamma_defect(z) <= GAMMA_TOL {
                            out.points.push(GammaPoint { point: z, theta, phi, residual: r });
                        }
                    }
                }
                Err(e) => out.failures.push((theta, phi, e.to_string())),
            }
        }
    }
    Ok(out)
}

/// CSV export with columns `re_z1, im_z1, re_z2, im_z2, theta, phi, residual`.
pub fn write_csv<W: Write>(points: &[GammaPoint], mut out: W) -> std::io::Result<()> {
    writeln!(out, "re_z1,im_z1,re_z2,im_z2,theta,phi,residual")?;
    for p in points {
        writeln!(
            out,
            "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.3e}",
            p.point[0].re, p.point[0].im, p.point[1].re, p.point[1].im, p.theta, p.phi, p.residual
        )?;
    }
    Ok(())
}
