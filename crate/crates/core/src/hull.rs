//! Polynomial hull of the graph of `conj(P∘Ψ)` over the distinguished
//! boundary Γ of `{|p1| < 1, |p2| < 1}`.
//!
//! The pipeline: reflect `P` into `K` and `h = K / (w1^m w2^n)`, form the
//! numerator `N` of the determinant `Δ` whose zero set is where the relation
//! set `X = {conj(P∘Ψ) = h∘Ψ}` fails to be totally real, factor `N`, and test
//! each irreducible factor `q` for the four membership conditions of `J`:
//! `P∘Ψ` constant on `{q = 0}`, `h∘Ψ` equal to its conjugate there, a point
//! of `{q = 0}` on Γ, and a point of `{q = 0}` strictly inside the
//! polyhedron and away from `L = {p1·p2 = 0}`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{HullError, NumericError};
use crate::factor::{self, Factor, FactorList, DEFAULT_MAX_DEGREE};
use crate::gaussian::GaussianRational;
use crate::gcd;
use crate::laurent::LaurentFraction;
use crate::numpoly::NumPoly;
use crate::poly::{BiPoly, Var};
use crate::polyhedron::{CheckReport, PolyhedronSpec, Verdict};
use crate::solve::{self, CPoint, ModulusTarget};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Tolerances {
    pub numeric_tol: f64,
    /// `δ` in the interior-witness conditions.
    pub boundary_margin: f64,
    /// Denominator bound when rounding a sampled value to a Gaussian rational.
    pub max_denominator: u64,
    /// Total-degree cap for factorization.
    pub max_degree: u32,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { numeric_tol: 1e-9, boundary_margin: 1e-3, max_denominator: 1_000_000, max_degree: DEFAULT_MAX_DEGREE }
    }
}

/// `(p1, p2, P)` with `P` written in the codomain variables `w1, w2`
/// (stored as `z1, z2`).
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub p1: BiPoly,
    pub p2: BiPoly,
    pub data: BiPoly,
    pub m: u32,
    pub n: u32,
    pub tolerances: Tolerances,
    pub seed: u64,
}

impl ProblemSpec {
    pub fn new(p1: BiPoly, p2: BiPoly, data: BiPoly) -> Result<Self, HullError> {
        if p1.is_constant() || p2.is_constant() {
            return Err(HullError::InvalidSpec("p1 and p2 must be non-constant".into()));
        }
        if data.is_constant() {
            return Err(HullError::InvalidSpec("P must be non-constant".into()));
        }
        let (m, n) = (data.deg_z1(), data.deg_z2());
        Ok(Self { p1, p2, data, m, n, tolerances: Tolerances::default(), seed: 0 })
    }

    pub fn with_tolerances(mut self, t: Tolerances) -> Self {
        self.tolerances = t;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn polyhedron(&self) -> PolyhedronSpec {
        PolyhedronSpec { p1: self.p1.clone(), p2: self.p2.clone() }
    }

    pub fn psi(&self) -> (&BiPoly, &BiPoly) {
        (&self.p1, &self.p2)
    }

    /// The reflected polynomial `K`.
    pub fn reflected(&self) -> BiPoly {
        self.data.conjugate_reflect().expect("P is non-constant").0
    }
}

/// `h = K / (w1^m w2^n)`, so that `h(w) = conj(P(w))` on the torus.
pub fn build_h(spec: &ProblemSpec) -> Result<LaurentFraction, HullError> {
    let (k, m, n) = spec.data.conjugate_reflect()?;
    Ok(LaurentFraction::new(k, m, n))
}

/// `N = p1^{m+1} p2^{n+1} Δ`, a polynomial.
pub fn delta_numerator(spec: &ProblemSpec) -> BiPoly {
    let k = spec.reflected();
    let (m, n) = (GaussianRational::from_int(spec.m as i64), GaussianRational::from_int(spec.n as i64));
    let psi = spec.psi();
    let a = spec.data.partial_derivative(Var::Z1).compose_with_map(psi);
    let b = spec.data.partial_derivative(Var::Z2).compose_with_map(psi);
    let c1 = (&(&BiPoly::z1() * &k.partial_derivative(Var::Z1)) - &k.scale(&m)).compose_with_map(psi);
    let c2 = (&(&BiPoly::z2() * &k.partial_derivative(Var::Z2)) - &k.scale(&n)).compose_with_map(psi);
    let jac = spec.polyhedron().jacobian();
    let bracket = &(&(&a * &c2) * &spec.p1) - &(&(&b * &c1) * &spec.p2);
    &bracket * &jac
}

/// Irreducible factors of `N` with multiplicities. When `N` exceeds the
/// degree cap, its square-free part is factored instead and multiplicities
/// are recovered by division.
pub fn factor_delta(numerator: &BiPoly, max_degree: u32) -> Result<FactorList, HullError> {
    if numerator.is_zero() {
        return Err(HullError::DeltaIdenticallyZero);
    }
    if numerator.total_degree() <= max_degree {
        return Ok(factor::factor_irreducible_with_bound(numerator, max_degree)?);
    }
    let d = gcd::gcd(
        numerator,
        &gcd::gcd(&numerator.partial_derivative(Var::Z1), &numerator.partial_derivative(Var::Z2))
            .unwrap_or_else(|_| BiPoly::one()),
    )?;
    let sqf = numerator.divide_exact(&d)?;
    let base = factor::factor_irreducible_with_bound(&sqf, max_degree)?;
    let mut rest = numerator.clone();
    let mut factors = Vec::new();
    for f in base.polys() {
        let mut mult = 0;
        while let Ok(q) = rest.divide_exact(f) {
            rest = q;
            mult += 1;
        }
        factors.push(Factor { poly: f.clone(), multiplicity: mult });
    }
    let unit = rest
        .constant_value()
        .ok_or_else(|| HullError::Poly(crate::error::PolyError::FactorizationFailed("cofactor not constant".into())))?;
    Ok(FactorList { unit, factors })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EvidenceMode {
    Exact,
    NumericOnly,
    Flagged,
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaIntersection {
    pub nonempty: bool,
    #[serde(with = "solve::serde_point::option")]
    pub witness: Option<CPoint>,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentReport {
    pub q: BiPoly,
    pub multiplicity: u32,
    pub c_constant: Option<GaussianRational>,
    /// Sampled value of `P∘Ψ` when constancy holds only numerically.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_numeric: Option<[f64; 2]>,
    pub p_psi_constant_exact: bool,
    pub h_psi_matches_exact: bool,
    pub gamma_intersection: GammaIntersection,
    #[serde(with = "solve::serde_point::option")]
    pub interior_witness: Option<CPoint>,
    /// `{q = 0}` lies inside `L` because `q` divides `p1` or `p2`.
    pub inside_l: bool,
    /// `P∘Ψ` takes few distinct values on `{q = 0}`: `q` may split over C.
    pub suspected_reducible_over_c: bool,
    #[serde(rename = "inJ")]
    pub in_j: bool,
    pub evidence_mode: EvidenceMode,
}

/// Exact compositions shared by all component analyses.
pub struct Pipeline<'a> {
    spec: &'a ProblemSpec,
    p_psi: BiPoly,
    k_psi: BiPoly,
    torus_weight: BiPoly,
    np_p_psi: NumPoly,
    np_p1: NumPoly,
    np_p2: NumPoly,
    h: LaurentFraction,
}

impl<'a> Pipeline<'a> {
    pub fn new(spec: &'a ProblemSpec) -> Result<Self, HullError> {
        let p_psi = spec.data.compose_with_map(spec.psi());
        let k_psi = spec.reflected().compose_with_map(spec.psi());
        let torus_weight = &spec.p1.pow(spec.m) * &spec.p2.pow(spec.n);
        Ok(Self {
            np_p_psi: NumPoly::from_bipoly(&p_psi),
            np_p1: NumPoly::from_bipoly(&spec.p1),
            np_p2: NumPoly::from_bipoly(&spec.p2),
            h: build_h(spec)?,
            p_psi,
            k_psi,
            torus_weight,
            spec,
        })
    }

    pub fn p_psi(&self) -> &BiPoly {
        &self.p_psi
    }

    /// `(h∘Ψ)(z)`.
    pub fn h_psi(&self, z: CPoint) -> Complex64 {
        self.h.evaluate(self.np_p1.eval(z[0], z[1]), self.np_p2.eval(z[0], z[1]))
    }

    fn interior_ok(&self, z: CPoint) -> bool {
        let delta = self.spec.tolerances.boundary_margin;
        let a = self.np_p1.eval(z[0], z[1]).norm();
        let b = self.np_p2.eval(z[0], z[1]).norm();
        a <= 1.0 - delta && b <= 1.0 - delta && a * b >= delta
    }

    fn unit_targets(&self) -> Vec<ModulusTarget> {
        self.moduli(1.0, 1.0)
    }

    fn moduli(&self, r1: f64, r2: f64) -> Vec<ModulusTarget> {
        vec![
            ModulusTarget { poly: self.np_p1.clone(), modulus: r1 },
            ModulusTarget { poly: self.np_p2.clone(), modulus: r2 },
        ]
    }

    /// Runs the four membership tests for one irreducible factor.
    pub fn analyze_component(&self, q: &BiPoly, multiplicity: u32) -> Result<ComponentReport, HullError> {
        let tol = self.spec.tolerances.numeric_tol;
        let seed = self.spec.seed;
        let nq = NumPoly::from_bipoly(q);
        let inside_l = q.divides(&self.spec.p1) || q.divides(&self.spec.p2);

        let samples = solve::sample_curve(&nq, &[0.5, 1.0, 2.0], 32, seed);
        if samples.is_empty() {
            return Err(NumericError::NoSamplePointFound.into());
        }
        let values: Vec<Complex64> = samples.iter().map(|z| self.np_p_psi.eval(z[0], z[1])).collect();

        // (1) constancy of P∘Ψ on {q = 0}
        let mut c_constant = None;
        let mut c_numeric = None;
        let mut suspected_reducible = false;
        let rounded = GaussianRational::approximate(values[0], self.spec.tolerances.max_denominator, 1e-6 * (1.0 + values[0].norm()));
        if let Some(c) = rounded {
            if q.divides(&(&self.p_psi - &BiPoly::constant(c.clone()))) {
                c_constant = Some(c);
            }
        }
        if c_constant.is_none() {
            let scale = 1.0 + values[0].norm();
            if values.iter().all(|v| (v - values[0]).norm() <= tol * scale) {
                c_numeric = Some(values[0]);
            } else {
                let mut distinct: Vec<Complex64> = Vec::new();
                for v in &values {
                    if !distinct.iter().any(|d| (d - v).norm() <= 1e-7 * (1.0 + v.norm())) {
                        distinct.push(*v);
                    }
                }
                suspected_reducible = distinct.len() as u32 <= q.total_degree() && values.len() > distinct.len() * 2;
            }
        }
        let p_psi_constant_exact = c_constant.is_some();

        // (2) h∘Ψ = conj(c) on {q = 0}, exactly: q | K∘Ψ − conj(c)·p1^m p2^n
        let h_psi_matches_exact = match &c_constant {
            Some(c) => q.divides(&(&self.k_psi - &self.torus_weight.scale(&c.conj()))),
            None => false,
        };
        let h_numeric = c_numeric.is_some_and(|c| {
            samples
                .iter()
                .filter(|z| (self.np_p1.eval(z[0], z[1]) * self.np_p2.eval(z[0], z[1])).norm() > 1e-3)
                .all(|z| (self.h_psi(*z) - c.conj()).norm() <= 1e3 * tol * (1.0 + c.norm()))
        });

        // (3) a point of {q = 0} on Γ
        let radii = [0.25, 0.5, 1.0, 2.0, 4.0];
        let gamma = match solve::find_on_curve(&nq, &self.unit_targets(), &radii, tol * 1e-3, seed) {
            Some((z, r)) if r <= tol => GammaIntersection { nonempty: true, witness: Some(z), residual: r },
            Some((_, r)) => GammaIntersection { nonempty: false, witness: None, residual: r },
            None => GammaIntersection { nonempty: false, witness: None, residual: f64::INFINITY },
        };

        // (4) a point of {q = 0} inside the polyhedron, off L
        let interior_witness = if inside_l { None } else { self.interior_witness(&nq) };

        let constant_ok = p_psi_constant_exact && h_psi_matches_exact || c_numeric.is_some() && h_numeric;
        let in_j = !inside_l && constant_ok && gamma.nonempty && interior_witness.is_some();
        let evidence_mode = if c_numeric.is_some() || suspected_reducible {
            EvidenceMode::Flagged
        } else if p_psi_constant_exact || inside_l {
            EvidenceMode::Exact
        } else {
            EvidenceMode::NumericOnly
        };
        Ok(ComponentReport {
            q: q.clone(),
            multiplicity,
            c_constant,
            c_numeric: c_numeric.map(|c| [c.re, c.im]),
            p_psi_constant_exact,
            h_psi_matches_exact,
            gamma_intersection: gamma,
            interior_witness,
            inside_l,
            suspected_reducible_over_c: suspected_reducible,
            in_j,
            evidence_mode,
        })
    }

    fn interior_witness(&self, nq: &NumPoly) -> Option<CPoint> {
        let tol = self.spec.tolerances.numeric_tol;
        let accept = |z: &CPoint| nq.eval(z[0], z[1]).norm() <= tol && self.interior_ok(*z);
        let cloud = solve::sample_curve(nq, &[0.25, 0.5, 1.0, 2.0], 256, self.spec.seed ^ 0x5eed);
        if let Some(z) = cloud.iter().find(|z| accept(z)) {
            return Some(*z);
        }
        let grid = [0.3, 0.5, 0.7, 0.9];
        for (k, r1) in grid.iter().enumerate() {
            for (l, r2) in grid.iter().enumerate() {
                let seed = self.spec.seed.wrapping_add((4 * k + l) as u64);
                let found = solve::find_on_curve(nq, &self.moduli(*r1, *r2), &[0.5, 1.0, 2.0], tol * 1e-3, seed);
                if let Some((z, _)) = found.filter(|(z, _)| accept(z)) {
                    return Some(z);
                }
            }
        }
        None
    }
}

pub fn analyze_component(q: &BiPoly, spec: &ProblemSpec) -> Result<ComponentReport, HullError> {
    Pipeline::new(spec)?.analyze_component(q, 1)
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum Classification {
    PolynomiallyConvex,
    HullWithVarieties { varieties: Vec<HullPiece> },
    DegenerateDeltaZero,
    HypothesisFailure { reason: String },
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::PolynomiallyConvex => "PolynomiallyConvex",
            Classification::HullWithVarieties { .. } => "HullWithVarieties",
            Classification::DegenerateDeltaZero => "DegenerateDeltaZero",
            Classification::HypothesisFailure { .. } => "HypothesisFailure",
        }
    }
}

/// `{(z, conj(c)) : q(z) = 0, |p1(z)| ≤ 1, |p2(z)| ≤ 1}`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HullPiece {
    pub variety: BiPoly,
    /// `P∘Ψ` on the variety; the graph value there is its conjugate.
    pub constant: Option<GaussianRational>,
    pub value: Option<GaussianRational>,
    pub description: String,
    /// The hull of `Q_j` is identified with `Z_j ∩ closure(D)`; this is
    /// corroborated by witnesses, not proved.
    pub identification_validated_numerically: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ApproximationVerdict {
    Holds,
    Fails,
    Undetermined,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HullReport {
    pub classification: Classification,
    pub delta_numerator: BiPoly,
    pub delta_factors: Option<FactorList>,
    pub components: Vec<ComponentReport>,
    pub approximation_verdict: ApproximationVerdict,
    pub notes: Vec<String>,
}

impl HullReport {
    pub fn j(&self) -> impl Iterator<Item = &ComponentReport> {
        self.components.iter().filter(|c| c.in_j)
    }
}

pub fn decide_approximation(report: &HullReport) -> ApproximationVerdict {
    if report.components.iter().any(|c| c.evidence_mode == EvidenceMode::Flagged) {
        return ApproximationVerdict::Undetermined;
    }
    match report.classification {
        Classification::PolynomiallyConvex => ApproximationVerdict::Holds,
        Classification::HullWithVarieties { .. } => ApproximationVerdict::Fails,
        _ => ApproximationVerdict::Undetermined,
    }
}

/// Full classification. Failed hypothesis checks yield
/// `HypothesisFailure` unless `override_hypotheses` is set; the algebraic
/// part is still computed and reported.
pub fn classify_with_checks(
    spec: &ProblemSpec,
    checks: &[CheckReport],
    override_hypotheses: bool,
) -> Result<HullReport, HullError> {
    let numerator = delta_numerator(spec);
    let mut notes = Vec::new();
    if numerator.is_zero() {
        let mut report = HullReport {
            classification: Classification::DegenerateDeltaZero,
            delta_numerator: numerator,
            delta_factors: None,
            components: Vec::new(),
            approximation_verdict: ApproximationVerdict::Undetermined,
            notes: vec!["Δ vanishes identically; the classification hypothesis Δ ≢ 0 is unmet".into()],
        };
        report.approximation_verdict = decide_approximation(&report);
        return Ok(report);
    }
    let factors = factor_delta(&numerator, spec.tolerances.max_degree)?;
    let pipeline = Pipeline::new(spec)?;
    let mut components = Vec::new();
    for f in &factors.factors {
        components.push(pipeline.analyze_component(&f.poly, f.multiplicity)?);
    }
    if factors.factors.iter().any(|f| f.multiplicity > 1) {
        notes.push("factor multiplicities of Δ are informational; components use the square-free part".into());
    }
    let failed: Vec<&CheckReport> = checks.iter().filter(|c| c.verdict == Verdict::Fail).collect();
    let classification = if !failed.is_empty() && !override_hypotheses {
        let names: Vec<&str> = failed.iter().map(|c| c.name.as_str()).collect();
        Classification::HypothesisFailure { reason: format!("failed checks: {}", names.join(", ")) }
    } else {
        let pieces: Vec<HullPiece> = components
            .iter()
            .filter(|c| c.in_j)
            .map(|c| {
                let value = c.c_constant.as_ref().map(GaussianRational::conj);
                let shown = value.as_ref().map_or_else(
                    || {
                        let v = c.c_numeric.unwrap_or([f64::NAN; 2]);
                        format!("{:.12}{:+.12}*i (numeric)", v[0], -v[1])
                    },
                    |v| v.to_string(),
                );
                HullPiece {
                    variety: c.q.clone(),
                    constant: c.c_constant.clone(),
                    value,
                    description: format!("{{(z, {shown}) : {} = 0, |p1(z)| <= 1, |p2(z)| <= 1}}", c.q),
                    identification_validated_numerically: c.gamma_intersection.nonempty && c.interior_witness.is_some(),
                }
            })
            .collect();
        if pieces.is_empty() {
            Classification::PolynomiallyConvex
        } else {
            notes.push(format!(
                "{} hull piece(s); each is identified with Z_j ∩ closure(D) and validated numerically only",
                pieces.len()
            ));
            Classification::HullWithVarieties { varieties: pieces }
        }
    };
    if components.iter().any(|c| c.evidence_mode == EvidenceMode::Flagged) {
        notes.push("a component rests on unconfirmed numeric evidence; approximation left undetermined".into());
    }
    for c in checks.iter().filter(|c| c.verdict == Verdict::Inconclusive) {
        notes.push(format!("check {} inconclusive: {}", c.name, c.detail));
    }
    let mut report = HullReport {
        classification,
        delta_numerator: numerator,
        delta_factors: Some(factors),
        components,
        approximation_verdict: ApproximationVerdict::Undetermined,
        notes,
    };
    report.approximation_verdict = decide_approximation(&report);
    Ok(report)
}

/// Classification with hypothesis checks skipped.
pub fn classify(spec: &ProblemSpec) -> Result<HullReport, HullError> {
    classify_with_checks(spec, &[], true)
}
