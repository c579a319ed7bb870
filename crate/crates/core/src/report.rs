//! Assembles the JSON report shared by all subcommands.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::HullError;
use crate::factor::FactorList;
use crate::hull::{
    classify_with_checks, delta_numerator, factor_delta, ApproximationVerdict, Classification, ComponentReport,
    HullReport, ProblemSpec, Tolerances,
};
use crate::poly::BiPoly;
use crate::polyhedron::{self, CheckReport, Method, PolyhedronSpec, Verdict};
use crate::solve::CPoint;
use crate::verify::{self, GraphPoint, ResidualStats, SeparationCertificate};

/// Contract bounds checked by the verification section.
pub const BOUNDARY_RESIDUAL_MAX: f64 = 1e-8;
pub const DELTA_DEVIATION_MAX: f64 = 1e-8;
pub const DELTA_TRIALS: usize = 64;
pub const SEPARATION_PROBES: usize = 16;
pub const COMPONENT_SAMPLES: usize = 256;
/// Offset of the off-graph probes in the `w` coordinate.
pub const PROBE_OFFSET: f64 = 0.25;

#[derive(Clone, Debug)]
pub struct Options {
    pub tolerances: Tolerances,
    /// Grid size per axis for Γ sampling and the non-degeneracy scan.
    pub samples: usize,
    pub sep_degree: u32,
    pub seed: u64,
    pub timestamp: bool,
    pub override_hypotheses: bool,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            samples: 32,
            sep_degree: 6,
            seed: 0,
            timestamp: true,
            override_hypotheses: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InputSection {
    pub p1: String,
    pub p2: String,
    #[serde(rename = "P", skip_serializing_if = "Option::is_none")]
    pub data: Option<String>,
    pub tolerances: Tolerances,
    pub samples: usize,
    pub sep_degree: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaSection {
    pub numerator: BiPoly,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    pub factors: Vec<crate::factor::Factor>,
}

impl DeltaSection {
    fn new(numerator: BiPoly, factors: Option<&FactorList>) -> Self {
        Self {
            numerator,
            unit: factors.map(|f| f.unit.to_string()),
            factors: factors.map(|f| f.factors.clone()).unwrap_or_default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentResidual {
    pub q: BiPoly,
    pub samples: usize,
    pub max: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Residuals {
    pub delta_cross_check: f64,
    pub boundary_relation: Option<ResidualStats>,
    pub gamma_samples: usize,
    pub gamma_failures: usize,
    pub component_relation: Vec<ComponentResidual>,
    pub sigma_points: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CertificateEntry {
    /// `hullPiece` (expected not separated) or `probe` (expected separated).
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variety: Option<BiPoly>,
    pub point: [[f64; 2]; 3],
    pub expected_separated: bool,
    pub certificate: SeparationCertificate,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationSection {
    pub residuals: Residuals,
    pub certificates: Vec<CertificateEntry>,
    pub violations: Vec<String>,
    pub consistent: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Assertions {
    /// Leaves `{p_i = c}`, `|c| = 1`, are assumed simply connected; the tool
    /// does not test this.
    pub simply_connected_leaves: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub input: InputSection,
    pub checks: Vec<CheckReport>,
    pub delta: Option<DeltaSection>,
    pub components: Vec<ComponentReport>,
    pub classification: Option<Classification>,
    pub approximation: Option<ApproximationVerdict>,
    pub verification: Option<VerificationSection>,
    pub notes: Vec<String>,
    pub errors: Vec<String>,
    pub assertions: Assertions,
    pub seed: u64,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl Report {
    pub fn new(p1: &BiPoly, p2: &BiPoly, data: Option<&BiPoly>, opts: &Options) -> Self {
        Self {
            input: InputSection {
                p1: p1.to_string(),
                p2: p2.to_string(),
                data: data.map(|d| d.render_with(["w1", "w2"])),
                tolerances: opts.tolerances,
                samples: opts.samples,
                sep_degree: opts.sep_degree,
            },
            checks: Vec::new(),
            delta: None,
            components: Vec::new(),
            classification: None,
            approximation: None,
            verification: None,
            notes: Vec::new(),
            errors: Vec::new(),
            assertions: Assertions { simply_connected_leaves: "unverified user assertion" },
            seed: opts.seed,
            version: env!("CARGO_PKG_VERSION"),
            timestamp: opts.timestamp.then(|| {
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0)
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn any_check_failed(&self) -> bool {
        self.checks.iter().any(|c| c.verdict == Verdict::Fail)
    }
}

fn failed_check(name: &str, err: &HullError) -> CheckReport {
    CheckReport {
        name: name.to_string(),
        verdict: Verdict::Inconclusive,
        method: Method::Sampled,
        witnesses: Vec::new(),
        detail: format!("check could not run: {err}"),
        observed_min: None,
    }
}

/// Non-degeneracy, properness and contractibility. Solver failures become
/// inconclusive entries instead of errors.
pub fn run_checks(spec: &PolyhedronSpec, opts: &Options) -> Vec<CheckReport> {
    let nondeg = polyhedron::check_nondegeneracy(spec, opts.samples.max(1), opts.seed)
        .unwrap_or_else(|e| failed_check("nondegeneracy", &e));
    let proper = polyhedron::check_properness(spec, opts.seed).unwrap_or_else(|e| failed_check("properness", &e));
    let contractible = polyhedron::check_contractible_homogeneous(spec, Some(&proper));
    vec![nondeg, proper, contractible]
}

pub fn check_report(spec: &PolyhedronSpec, opts: &Options) -> Report {
    let mut r = Report::new(&spec.p1, &spec.p2, None, opts);
    r.checks = run_checks(spec, opts);
    r
}

pub fn delta_report(spec: &ProblemSpec, opts: &Options) -> Report {
    let mut r = Report::new(&spec.p1, &spec.p2, Some(&spec.data), opts);
    let n = delta_numerator(spec);
    match factor_delta(&n, spec.tolerances.max_degree) {
        Ok(f) => r.delta = Some(DeltaSection::new(n, Some(&f))),
        Err(HullError::DeltaIdenticallyZero) => {
            r.delta = Some(DeltaSection::new(n, None));
            r.notes.push("Δ vanishes identically".into());
        }
        Err(e) => {
            r.delta = Some(DeltaSection::new(n, None));
            r.errors.push(e.to_string());
        }
    }
    r
}

fn fill_from_hull(r: &mut Report, hull: HullReport) {
    r.delta = Some(DeltaSection::new(hull.delta_numerator, hull.delta_factors.as_ref()));
    r.components = hull.components;
    r.classification = Some(hull.classification);
    r.approximation = Some(hull.approximation_verdict);
    r.notes.extend(hull.notes);
}

pub fn hull_report(spec: &ProblemSpec, opts: &Options) -> Report {
    let mut r = Report::new(&spec.p1, &spec.p2, Some(&spec.data), opts);
    r.checks = run_checks(&spec.polyhedron(), opts);
    match classify_with_checks(spec, &r.checks, opts.override_hypotheses) {
        Ok(h) => fill_from_hull(&mut r, h),
        Err(e) => r.errors.push(e.to_string()),
    }
    r
}

fn point3(p: &GraphPoint) -> [[f64; 2]; 3] {
    [[p[0].re, p[0].im], [p[1].re, p[1].im], [p[2].re, p[2].im]]
}

/// Numeric oracles against a classification: Δ cross-check, boundary
/// relation on Γ, the relation on each hull piece, and separation evidence
/// (hull-piece points must not separate; off-graph probes of a polynomially
/// convex graph must).
pub fn verification(spec: &ProblemSpec, classification: Option<&Classification>, opts: &Options) -> Result<VerificationSection, HullError> {
    let mut violations = Vec::new();
    let deviation = verify::cross_check_delta(spec, DELTA_TRIALS, opts.seed)?;
    if deviation > DELTA_DEVIATION_MAX {
        violations.push(format!("Δ cross-check deviation {deviation:.3e} exceeds {DELTA_DEVIATION_MAX:e}"));
    }
    let gamma = polyhedron::sample_gamma(&spec.polyhedron(), opts.samples.max(1), opts.samples.max(1), opts.seed)?;
    let zs: Vec<CPoint> = gamma.points.iter().map(|p| p.point).collect();
    let boundary = if zs.is_empty() {
        violations.push("no Γ samples found".into());
        None
    } else {
        let stats = verify::verify_boundary_relation(spec, &zs)?;
        if stats.max > BOUNDARY_RESIDUAL_MAX {
            violations.push(format!("boundary relation residual {:.3e} exceeds {BOUNDARY_RESIDUAL_MAX:e}", stats.max));
        }
        Some(stats)
    };
    let cloud = verify::graph_points(spec, &zs);

    let mut component_relation = Vec::new();
    let mut certificates = Vec::new();
    let mut x_samples = Vec::new();
    match classification {
        Some(Classification::HullWithVarieties { varieties }) => {
            for piece in varieties {
                let pts = verify::sample_variety_in_polyhedron(
                    spec,
                    &piece.variety,
                    COMPONENT_SAMPLES,
                    spec.tolerances.boundary_margin,
                    opts.seed,
                );
                let max = if pts.is_empty() { f64::NAN } else { verify::verify_boundary_relation(spec, &pts)?.max };
                if !(max <= BOUNDARY_RESIDUAL_MAX) {
                    violations.push(format!("relation on {} fails: {max:.3e}", piece.variety));
                }
                component_relation.push(ComponentResidual { q: piece.variety.clone(), samples: pts.len(), max });
                let value = piece
                    .value
                    .as_ref()
                    .map(|v| v.to_complex())
                    .unwrap_or_else(|| pts.first().map(|z| verify::graph_points(spec, &[*z])[0][2]).unwrap_or_default());
                if !cloud.is_empty() {
                    for z in pts.iter().take(SEPARATION_PROBES) {
                        let point = [z[0], z[1], value];
                        let cert = verify::separation_search(&cloud, point, opts.sep_degree)?;
                        if cert.separated {
                            violations.push(format!("hull-piece point on {} separated", piece.variety));
                        }
                        certificates.push(CertificateEntry {
                            kind: "hullPiece".into(),
                            variety: Some(piece.variety.clone()),
                            point: point3(&point),
                            expected_separated: false,
                            certificate: cert,
                        });
                    }
                }
                x_samples.extend(pts);
            }
        }
        Some(Classification::PolynomiallyConvex) if !cloud.is_empty() => {
            let step = (cloud.len() / SEPARATION_PROBES).max(1);
            for (k, p) in cloud.iter().step_by(step).take(SEPARATION_PROBES).enumerate() {
                let shift = Complex64::from_polar(PROBE_OFFSET, TAU * k as f64 / SEPARATION_PROBES as f64);
                let point = [p[0], p[1], p[2] + shift];
                let cert = verify::separation_search(&cloud, point, opts.sep_degree)?;
                if !cert.separated {
                    violations.push("off-graph probe not separated".into());
                }
                certificates.push(CertificateEntry {
                    kind: "probe".into(),
                    variety: None,
                    point: point3(&point),
                    expected_separated: true,
                    certificate: cert,
                });
            }
        }
        _ => {}
    }
    let factors = factor_delta(&delta_numerator(spec), spec.tolerances.max_degree).ok();
    let scan = verify::totally_real_scan(spec, &x_samples, factors.as_ref(), 1e-8);
    Ok(VerificationSection {
        residuals: Residuals {
            delta_cross_check: deviation,
            boundary_relation: boundary,
            gamma_samples: zs.len(),
            gamma_failures: gamma.failures.len(),
            component_relation,
            sigma_points: scan.sigma_points.len(),
        },
        certificates,
        consistent: violations.is_empty(),
        violations,
    })
}

/// Classification followed by verification.
pub fn verify_report(spec: &ProblemSpec, opts: &Options) -> Report {
    let mut r = hull_report(spec, opts);
    match verification(spec, r.classification.as_ref(), opts) {
        Ok(v) => r.verification = Some(v),
        Err(e) => r.errors.push(format!("verification: {e}")),
    }
    r
}

/// Point-cloud rows for the Γ CSV export.
pub fn gamma_csv(spec: &PolyhedronSpec, opts: &Options) -> Result<(String, usize), HullError> {
    let g = polyhedron::sample_gamma(spec, opts.samples.max(1), opts.samples.max(1), opts.seed)?;
    let mut buf = Vec::new();
    polyhedron::write_csv(&g.points, &mut buf).expect("writing to memory");
    Ok((String::from_utf8(buf).expect("ascii"), g.failures.len()))
}

/// Exit status: 2 when a check fails or the classification is degenerate
/// or a hypothesis failure, 1 on errors, 0 otherwise.
pub fn exit_code(r: &Report) -> u8 {
    if !r.errors.is_empty() {
        return 1;
    }
    let degenerate = matches!(
        r.classification,
        Some(Classification::DegenerateDeltaZero) | Some(Classification::HypothesisFailure { .. })
    ) || r.delta.as_ref().is_some_and(|d| d.numerator.is_zero());
    let inconsistent = r.verification.as_ref().is_some_and(|v| !v.consistent);
    if r.any_check_failed() || degenerate || inconsistent {
        2
    } else {
        0
    }
}

