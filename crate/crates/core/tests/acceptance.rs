//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Every tolerance and time budget is pinned below.

mod common;

use std::time::{Duration, Instant};

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use common::{fixture, nonzero_poly, poly, small_factor, z};
use polyhull::factor::factor_irreducible;
use polyhull::gcd::{gcd, normalize};
use polyhull::hull::{classify, ApproximationVerdict, Classification, HullReport};
use polyhull::poly::{BiPoly, Var};
use polyhull::polyhedron::{check_nondegeneracy, solve_fiber, PolyhedronSpec, Verdict};
use polyhull::report::{self, Options};

const EXAMPLE_BUDGET: Duration = Duration::from_secs(5);
const NONDEGENERACY_BUDGET: Duration = Duration::from_secs(10);
const DEGENERATE_BUDGET: Duration = Duration::from_secs(1);
const PROPERTY_BUDGET: Duration = Duration::from_secs(120);
const NONDEGENERACY_SAMPLES: usize = 64;
const WITNESS_MODULUS_TOL: f64 = 1e-8;
const WITNESS_Z2_MAX: f64 = 1e-6;
const WITNESS_RESIDUAL_MAX: f64 = 1e-8;
const PROPERTY_CASES: u32 = 1000;
const DELTA_DEVIATION_MAX: f64 = 1e-8;
const BOUNDARY_RESIDUAL_MAX: f64 = 1e-8;
const MIN_GAMMA_SAMPLES: usize = 128;
const SEPARATION_DEGREE: u32 = 6;
const FIBER_RESIDUAL_MAX: f64 = 1e-10;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(budget: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < budget, format!("took {t:.2?}, budget {budget:?}"))
}

fn factor_set_is(report: &HullReport, expected: &[&str]) -> Result<(), String> {
    let fl = report.delta_factors.as_ref().ok_or("no factorization")?;
    let got: Vec<String> = fl.polys().map(ToString::to_string).collect();
    ensure(
        fl.factors.len() == expected.len() && expected.iter().all(|e| fl.contains_associate_of(&z(e))),
        format!("factors {got:?}, expected associates of {expected:?}"),
    )
}

fn single_piece(report: &HullReport, q: &str) -> Result<(), String> {
    let Classification::HullWithVarieties { varieties } = &report.classification else {
        return Err(format!("classified as {}", report.classification.name()));
    };
    ensure(varieties.len() == 1, format!("{} hull pieces", varieties.len()))?;
    let piece = &varieties[0];
    ensure(piece.variety == normalize(&z(q)), format!("piece {} ≠ {q}", piece.variety))?;
    let zero = Some(polyhull::gaussian::GaussianRational::from_int(0));
    ensure(piece.value == zero, format!("value {:?}", piece.value))?;
    ensure(report.approximation_verdict == ApproximationVerdict::Fails, "approximation should fail")
}

fn polynomially_convex(report: &HullReport) -> Result<(), String> {
    ensure(
        matches!(report.classification, Classification::PolynomiallyConvex),
        format!("classified as {}", report.classification.name()),
    )?;
    ensure(report.approximation_verdict == ApproximationVerdict::Holds, "approximation should hold")
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let r = classify(&fixture(0)).map_err(|e| e.to_string())?;
    single_piece(&r, "z1+z2+z1*z2")?;
    factor_set_is(&r, &["z1+z2-z1*z2", "z1+z2+z1*z2", "z2-z1"])?;
    within(EXAMPLE_BUDGET, start)?;
    Ok(format!("hull piece z1*z2 + z1 + z2 with value 0, Δ = {}", r.delta_factors.unwrap()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let r = classify(&fixture(1)).map_err(|e| e.to_string())?;
    polynomially_convex(&r)?;
    within(EXAMPLE_BUDGET, start)?;
    Ok("PolynomiallyConvex, approximation Holds".into())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let r = classify(&fixture(2)).map_err(|e| e.to_string())?;
    single_piece(&r, "z1+2*z2^2")?;
    factor_set_is(&r, &["z1+2*z2^2", "z1", "z2"])?;
    within(EXAMPLE_BUDGET, start)?;
    Ok(format!("hull piece 2*z2^2 + z1 with value 0, Δ = {}", r.delta_factors.unwrap()))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let r = classify(&fixture(3)).map_err(|e| e.to_string())?;
    polynomially_convex(&r)?;
    within(EXAMPLE_BUDGET, start)?;
    Ok("PolynomiallyConvex, approximation Holds".into())
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let good = PolyhedronSpec::new(z("2*z1+z2^2"), z("z1-z2^2")).map_err(|e| e.to_string())?;
    let r = check_nondegeneracy(&good, NONDEGENERACY_SAMPLES, 0).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::Pass, format!("good pair: {:?} ({})", r.verdict, r.detail))?;
    let bad = PolyhedronSpec::new(z("z1+z2^2"), z("z1-z2^2")).map_err(|e| e.to_string())?;
    let r = check_nondegeneracy(&bad, NONDEGENERACY_SAMPLES, 0).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::Fail, format!("bad pair: {:?}", r.verdict))?;
    let w = r.witnesses.first().ok_or("Fail without witness")?;
    let [z1, z2] = w.point;
    ensure((z1.norm() - 1.0).abs() <= WITNESS_MODULUS_TOL, format!("|z1| = {}", z1.norm()))?;
    ensure(z2.norm() <= WITNESS_Z2_MAX, format!("|z2| = {:e}", z2.norm()))?;
    ensure(w.residual <= WITNESS_RESIDUAL_MAX, format!("witness residual {:e}", w.residual))?;
    within(NONDEGENERACY_BUDGET, start)?;
    Ok(format!("witness |z1| = {:.12}, |z2| = {:.1e}, residual {:.1e}", z1.norm(), z2.norm(), w.residual))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let spec = polyhull::hull::ProblemSpec::new(z("z1"), z("z2"), common::w("w1")).map_err(|e| e.to_string())?;
    let r = classify(&spec).map_err(|e| e.to_string())?;
    ensure(
        matches!(r.classification, Classification::DegenerateDeltaZero),
        format!("classified as {}", r.classification.name()),
    )?;
    ensure(r.approximation_verdict == ApproximationVerdict::Undetermined, "approximation should be Undetermined")?;
    within(DEGENERATE_BUDGET, start)?;
    Ok("DegenerateDeltaZero, approximation Undetermined".into())
}

fn run_property<S: Strategy>(name: &str, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let config = Config { cases: PROPERTY_CASES, failure_persistence: None, ..Config::default() };
    TestRunner::new(config).run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn property_suites() -> Result<(), String> {
    run_property("ring laws", (poly(4, 3), poly(4, 3), poly(4, 3)), |(a, b, c)| {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        Ok(())
    })?;
    run_property("Leibniz rule", (poly(4, 3), poly(4, 3)), |(a, b)| {
        for v in [Var::Z1, Var::Z2] {
            let lhs = (&a * &b).partial_derivative(v);
            let rhs = &(&a * &b.partial_derivative(v)) + &(&b * &a.partial_derivative(v));
            prop_assert_eq!(lhs, rhs);
        }
        Ok(())
    })?;
    run_property("gcd", (nonzero_poly(3, 2), nonzero_poly(3, 2), small_factor()), |(a, b, g)| {
        let d = gcd(&a, &b).unwrap();
        prop_assert!(d.divides(&a) && d.divides(&b));
        let scaled = gcd(&(&a * &g), &(&b * &g)).unwrap();
        prop_assert_eq!(scaled, normalize(&(&d * &g)));
        Ok(())
    })?;
    run_property("factor round-trip", prop::collection::vec(small_factor(), 1..=3), |fs| {
        let input = fs.iter().fold(BiPoly::from_int_terms(&[(-2, 0, 0)]), |acc, f| &acc * f);
        let fl = factor_irreducible(&input).unwrap();
        prop_assert_eq!(fl.expand(), input);
        Ok(())
    })
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    property_suites()?;
    let opts = Options { samples: 32, sep_degree: SEPARATION_DEGREE, seed: 7, timestamp: false, ..Options::default() };
    let mut worst_delta: f64 = 0.0;
    let mut worst_boundary: f64 = 0.0;
    let mut certificates = 0;
    for k in 0..4 {
        let spec = fixture(k);
        let r = classify(&spec).map_err(|e| e.to_string())?;
        let v = report::verification(&spec, Some(&r.classification), &opts).map_err(|e| e.to_string())?;
        ensure(v.consistent, format!("fixture {}: {:?}", k + 1, v.violations))?;
        let res = &v.residuals;
        ensure(res.delta_cross_check <= DELTA_DEVIATION_MAX, format!("Δ deviation {:e}", res.delta_cross_check))?;
        let boundary = res.boundary_relation.as_ref().ok_or("no boundary samples")?;
        ensure(res.gamma_samples >= MIN_GAMMA_SAMPLES, format!("{} Γ samples", res.gamma_samples))?;
        ensure(boundary.max <= BOUNDARY_RESIDUAL_MAX, format!("boundary residual {:e}", boundary.max))?;
        ensure(!v.certificates.is_empty(), format!("fixture {}: no separation certificates", k + 1))?;
        for c in &v.certificates {
            ensure(c.certificate.separated == c.expected_separated, format!("fixture {}: {} certificate disagrees", k + 1, c.kind))?;
        }
        worst_delta = worst_delta.max(res.delta_cross_check);
        worst_boundary = worst_boundary.max(boundary.max);
        certificates += v.certificates.len();
    }
    within(PROPERTY_BUDGET, start)?;
    Ok(format!(
        "{PROPERTY_CASES} cases per algebra suite; Δ deviation {worst_delta:.1e}, boundary residual {worst_boundary:.1e}, {certificates} separation certificates agree ({:.1?})",
        start.elapsed()
    ))
}

fn criterion_8() -> Outcome {
    let poly = PolyhedronSpec::new(z("z1+z2"), z("z1*z2")).map_err(|e| e.to_string())?;
    let fiber = solve_fiber(&poly, 0.0, 0.0, 0).map_err(|e| e.to_string())?;
    // z1, z2 are the two roots of z^2 - z + 1
    let r = (3.0f64).sqrt() / 2.0;
    let (a, b) = (Complex64::new(0.5, r), Complex64::new(0.5, -r));
    let expected = [[a, b], [b, a]];
    ensure(fiber.roots.len() == 2, format!("{} roots", fiber.roots.len()))?;
    for (root, res) in fiber.roots.iter().zip(&fiber.residuals) {
        ensure(*res <= FIBER_RESIDUAL_MAX, format!("residual {res:e}"))?;
        let close = expected.iter().any(|e| (root[0] - e[0]).norm() <= FIBER_RESIDUAL_MAX && (root[1] - e[1]).norm() <= FIBER_RESIDUAL_MAX);
        ensure(close, format!("unexpected root {root:?}"))?;
        ensure(root.iter().all(|c| (c.norm() - 1.0).abs() <= FIBER_RESIDUAL_MAX), "root off the unit circle")?;
    }
    ensure((fiber.roots[0][0] - fiber.roots[1][0]).norm() > 0.5, "duplicate roots")?;
    Ok(format!("roots (1±i√3)/2, max residual {:.1e}", fiber.residuals.iter().copied().fold(0.0, f64::max)))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("example 1 hull piece and Δ factors", criterion_1),
        ("example 2 polynomially convex", criterion_2),
        ("example 3 hull piece and Δ factors", criterion_3),
        ("example 4 polynomially convex", criterion_4),
        ("non-degeneracy pass and witness", criterion_5),
        ("degenerate Δ detection", criterion_6),
        ("property suites and numeric oracles", criterion_7),
        ("fiber solver at θ = φ = 0", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {}: {name} — {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} — {why}", k + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
