//! Invariants of the hull engine, the polyhedron checks and the numeric
//! oracles, exercised on the four worked fixtures and on random inputs.

mod common;

use num_complex::Complex64;
use proptest::prelude::*;

use common::{fixture, z, FIXTURES};
use polyhull::gaussian::GaussianRational;
use polyhull::hull::{classify, Classification};
use polyhull::numpoly::NumPoly;
use polyhull::poly::{BiPoly, Var};
use polyhull::polyhedron::{
    check_nondegeneracy, check_properness, sample_gamma, solve_fiber, PolyhedronSpec, Verdict, FIBER_TOL, GAMMA_TOL,
};
use polyhull::resultant::resultant;
use polyhull::verify::{
    cross_check_delta, graph_points, sample_variety_in_polyhedron, separation_search, verify_boundary_relation,
};

const DELTA_TOL: f64 = 1e-8;
const RELATION_TOL: f64 = 1e-8;

#[test]
fn delta_matches_direct_determinant() {
    for k in 0..FIXTURES.len() {
        let dev = cross_check_delta(&fixture(k), 64, 11).unwrap();
        assert!(dev <= DELTA_TOL, "fixture {k}: deviation {dev:e}");
    }
}

#[test]
fn hull_pieces_lie_in_x() {
    for k in 0..FIXTURES.len() {
        let spec = fixture(k);
        let report = classify(&spec).unwrap();
        for c in report.j() {
            let pts = sample_variety_in_polyhedron(&spec, &c.q, 256, spec.tolerances.boundary_margin, 3);
            assert_eq!(pts.len(), 256, "fixture {k}: too few samples on {}", c.q);
            let stats = verify_boundary_relation(&spec, &pts).unwrap();
            assert!(stats.max <= RELATION_TOL, "fixture {k} on {}: {:e}", c.q, stats.max);
        }
    }
}

#[test]
fn hull_pieces_satisfy_exact_congruences() {
    for k in 0..FIXTURES.len() {
        let spec = fixture(k);
        let report = classify(&spec).unwrap();
        let psi = spec.psi();
        let p_psi = spec.data.compose_with_map(psi);
        let k_psi = spec.reflected().compose_with_map(psi);
        let monomial = &spec.p1.pow(spec.m) * &spec.p2.pow(spec.n);
        for comp in report.j() {
            let Some(c) = &comp.c_constant else { continue };
            let shifted = &p_psi - &BiPoly::constant(c.clone());
            assert!(comp.q.divides(&shifted), "{} ∤ PΨ − c", comp.q);
            let reflected = &k_psi - &monomial.scale(&c.conj());
            assert!(comp.q.divides(&reflected), "{} ∤ KΨ − c̄ p1^m p2^n", comp.q);
        }
    }
}

#[test]
fn hull_piece_values_are_conjugate_constants() {
    for k in 0..FIXTURES.len() {
        let report = classify(&fixture(k)).unwrap();
        if let Classification::HullWithVarieties { varieties } = &report.classification {
            for piece in varieties {
                assert_eq!(piece.value, piece.constant.as_ref().map(GaussianRational::conj));
            }
        }
    }
}

#[test]
fn scaling_data_scales_constants() {
    let lambda = GaussianRational::from_ints(2, -1);
    for k in 0..FIXTURES.len() {
        let spec = fixture(k);
        let mut scaled = spec.clone();
        scaled.data = spec.data.scale(&lambda);
        let a = classify(&spec).unwrap();
        let b = classify(&scaled).unwrap();
        assert_eq!(a.classification.name(), b.classification.name());
        let ja: Vec<_> = a.j().collect();
        let jb: Vec<_> = b.j().collect();
        assert_eq!(ja.len(), jb.len());
        for (x, y) in ja.iter().zip(&jb) {
            assert_eq!(x.q, y.q);
            assert_eq!(x.c_constant.as_ref().map(|c| c * &lambda), y.c_constant);
        }
    }
}

#[test]
fn gamma_samples_lie_on_gamma() {
    for k in [0, 2] {
        let poly = fixture(k).polyhedron();
        let g = sample_gamma(&poly, 16, 16, 5).unwrap();
        assert!(g.failures.is_empty());
        for p in &g.points {
            assert!(poly.gamma_defect(p.point) <= GAMMA_TOL, "{:?}", p.point);
        }
    }
}

/// Pythagorean points on the unit circle keep the fiber equations exact.
fn torus_points() -> Vec<(GaussianRational, GaussianRational)> {
    let q = |a: i64, b: i64, c: i64| GaussianRational::new(
        num_rational::BigRational::new(a.into(), c.into()),
        num_rational::BigRational::new(b.into(), c.into()),
    );
    vec![(q(3, 4, 5), q(5, 12, 13)), (q(-8, 15, 17), q(7, -24, 25)), (q(20, 21, 29), q(-12, -35, 37))]
}

#[test]
fn fiber_count_matches_resultant_degree() {
    for (p1, p2) in [("z1+z2", "z1*z2"), ("2*z1+z2^2", "z1-z2^2")] {
        let poly = PolyhedronSpec::new(z(p1), z(p2)).unwrap();
        for (a, b) in torus_points() {
            let f = &poly.p1 - &BiPoly::constant(a.clone());
            let g = &poly.p2 - &BiPoly::constant(b.clone());
            let r = resultant(&f, &g, Var::Z2).unwrap();
            let (ac, bc) = (a.to_complex(), b.to_complex());
            let fiber = solve_fiber(&poly, ac.arg(), bc.arg(), 1).unwrap();
            assert_eq!(fiber.roots.len() as u32, r.deg_z1(), "{p1}, {p2} at ({a}, {b})");
            assert!(fiber.residuals.iter().all(|r| *r <= FIBER_TOL));
        }
    }
}

#[test]
fn nondegeneracy_witness_survives_refinement() {
    let poly = PolyhedronSpec::new(z("z1+z2^2"), z("z1-z2^2")).unwrap();
    let jac = NumPoly::from_bipoly(&poly.jacobian());
    for samples in [16, 64] {
        let r = check_nondegeneracy(&poly, samples, 9).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(!r.witnesses.is_empty());
        for w in &r.witnesses {
            let [z1, z2] = w.point;
            assert!(poly.gamma_defect(w.point) <= 1e-8);
            assert!(jac.eval(z1, z2).norm() <= 1e-8);
        }
    }
}

#[test]
fn separation_never_separates_cloud_points() {
    let spec = fixture(1);
    let g = sample_gamma(&spec.polyhedron(), 24, 24, 2).unwrap();
    let zs: Vec<_> = g.points.iter().map(|p| p.point).collect();
    let cloud = graph_points(&spec, &zs);
    for point in cloud.iter().step_by(cloud.len() / 12) {
        let cert = separation_search(&cloud, *point, 4).unwrap();
        assert!(!cert.separated, "cloud point separated: ratio {}", cert.value_at_point[0].hypot(cert.value_at_point[1]) / cert.sup_on_cloud);
    }
}

#[test]
fn boundary_residual_is_first_order_off_gamma() {
    let spec = fixture(1);
    let g = sample_gamma(&spec.polyhedron(), 8, 8, 4).unwrap();
    let residual_at = |eps: f64| {
        let moved: Vec<_> = g.points.iter().map(|p| [p.point[0] * (1.0 + eps), p.point[1]]).collect();
        verify_boundary_relation(&spec, &moved).unwrap().mean
    };
    let (small, large) = (residual_at(1e-5), residual_at(1e-4));
    let ratio = large / small;
    assert!((8.0..=12.0).contains(&ratio), "residual ratio {ratio} for a tenfold perturbation");
}

fn linear_form() -> impl Strategy<Value = BiPoly> {
    (-2i64..=2, -2i64..=2)
        .prop_filter("nonzero", |(a, b)| (*a, *b) != (0, 0))
        .prop_map(|(a, b)| BiPoly::from_int_terms(&[(a, 1, 0), (b, 0, 1)]))
}

fn homogeneous_form() -> impl Strategy<Value = BiPoly> {
    prop::collection::vec(linear_form(), 1..=2).prop_map(|ls| ls.iter().fold(BiPoly::one(), |acc, l| &acc * l))
}

/// A common zero off the origin, searched on the projective line at the
/// points where the generated linear forms vanish (and at infinity).
fn brute_force_common_zero(p1: &BiPoly, p2: &BiPoly) -> bool {
    let (a, b) = (NumPoly::from_bipoly(p1), NumPoly::from_bipoly(p2));
    let one = Complex64::new(1.0, 0.0);
    let mut line: Vec<[Complex64; 2]> = (-40..=40).map(|k| [one, Complex64::new(k as f64 / 20.0, 0.0)]).collect();
    line.push([Complex64::new(0.0, 0.0), one]);
    line.iter().any(|[x, y]| a.eval(*x, *y).norm() < 1e-12 && b.eval(*x, *y).norm() < 1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn homogeneous_properness_matches_brute_force(p1 in homogeneous_form(), p2 in homogeneous_form()) {
        let poly = PolyhedronSpec::new(p1.clone(), p2.clone()).unwrap();
        let r = check_properness(&poly, 0).unwrap();
        let expected = if brute_force_common_zero(&p1, &p2) { Verdict::Fail } else { Verdict::Pass };
        prop_assert_eq!(r.verdict, expected, "{} / {}", p1, p2);
    }
}

#[test]
fn psi_fixtures_are_proper_and_nondegenerate() {
    for k in [0, 2] {
        let poly = fixture(k).polyhedron();
        assert_eq!(check_properness(&poly, 0).unwrap().verdict, Verdict::Pass);
        assert_eq!(check_nondegeneracy(&poly, 32, 0).unwrap().verdict, Verdict::Pass);
    }
}
