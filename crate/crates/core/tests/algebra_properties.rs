//! Exact invariants of the polynomial layer on random inputs.

mod common;

use num_complex::Complex64;
use proptest::prelude::*;

use common::{nonzero_poly, poly, small_factor};
use polyhull::factor::factor_irreducible;
use polyhull::gaussian::GaussianRational;
use polyhull::gcd::{gcd, normalize};
use polyhull::poly::{BiPoly, Monomial, Var};
use polyhull::resultant::resultant;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn unit_disc_point() -> impl Strategy<Value = (Complex64, Complex64)> {
    (0.0..1.0f64, 0.0..6.3f64, 0.0..1.0f64, 0.0..6.3f64)
        .prop_map(|(r1, t1, r2, t2)| (Complex64::from_polar(r1, t1), Complex64::from_polar(r2, t2)))
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn ring_laws(a in poly(4, 3), b in poly(4, 3), c in poly(4, 3)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert!(a.terms().all(|(_, c)| !num_traits::Zero::is_zero(c)));
    }

    #[test]
    fn leibniz_rule(a in poly(4, 3), b in poly(4, 3)) {
        for v in [Var::Z1, Var::Z2] {
            let lhs = (&a * &b).partial_derivative(v);
            let rhs = &(&a * &b.partial_derivative(v)) + &(&b * &a.partial_derivative(v));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn evaluation_is_multiplicative(a in poly(5, 4), b in poly(5, 4), (z1, z2) in unit_disc_point()) {
        let ab = (&a * &b).evaluate(z1, z2);
        let prod = a.evaluate(z1, z2) * b.evaluate(z1, z2);
        let scale = 1.0 + prod.norm() + a.evaluate(z1, z2).norm() * b.evaluate(z1, z2).norm();
        prop_assert!((ab - prod).norm() <= 1e-10 * scale);
    }

    #[test]
    fn reflect_identity(p in nonzero_poly(5, 3)) {
        // K(w) = w1^m w2^n conj(P)(1/w1, 1/w2): multiply out by substituting
        // monomials, then compare term by term.
        let (k, m, n) = p.conjugate_reflect().unwrap();
        let cleared = BiPoly::from_terms(
            p.terms().map(|(mono, c)| (Monomial::new(m - mono.e1, n - mono.e2), c.conj())),
        );
        prop_assert_eq!(&k, &cleared);
        prop_assert_eq!(k.conjugate_reflect().unwrap().0.mul_monomial(Monomial::new(0, 0)).deg_z1() <= m, true);
        let back = k.conj_coeffs();
        for (mono, c) in p.terms() {
            prop_assert_eq!(back.coeff(m - mono.e1, n - mono.e2), c.clone());
        }
    }

    #[test]
    fn divide_round_trip(a in poly(4, 3), b in nonzero_poly(4, 3)) {
        let q = (&a * &b).divide_exact(&b).unwrap();
        prop_assert_eq!(q, a);
    }

    #[test]
    fn gcd_divides_and_scales(a in nonzero_poly(3, 2), b in nonzero_poly(3, 2), g in small_factor()) {
        let d = gcd(&a, &b).unwrap();
        prop_assert!(d.divides(&a) && d.divides(&b));
        let lifted = gcd(&(&a * &g), &(&b * &g)).unwrap();
        prop_assert_eq!(lifted, normalize(&(&g * &d)));
    }
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn factor_round_trip(fs in prop::collection::vec(small_factor(), 1..=3), c in common::coefficient()) {
        prop_assume!(!num_traits::Zero::is_zero(&c));
        let a = fs.iter().fold(BiPoly::constant(c), |acc, f| &acc * f);
        let fl = factor_irreducible(&a).unwrap();
        prop_assert_eq!(fl.expand(), a);
        for (i, f) in fl.factors.iter().enumerate() {
            prop_assert!(!f.poly.is_constant());
            prop_assert_eq!(&normalize(&f.poly), &f.poly);
            for (j, g) in fl.factors.iter().enumerate() {
                if i != j {
                    prop_assert!(!f.poly.divides(&g.poly));
                }
            }
        }
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(
        a in small_factor(), b in small_factor(), shared in prop::option::of(small_factor())
    ) {
        let (a, b) = match &shared {
            Some(s) => (&a * s, &b * s),
            None => (a, b),
        };
        for v in [Var::Z1, Var::Z2] {
            if a.degree_in(v) == 0 || b.degree_in(v) == 0 {
                continue;
            }
            let r = resultant(&a, &b, v).unwrap();
            let g = gcd(&a, &b).unwrap();
            prop_assert_eq!(r.is_zero(), g.degree_in(v) > 0, "{} / {} in {:?}", a, b, v);
        }
    }
}

#[test]
fn scalar_identities() {
    let half = GaussianRational::from_ratio(1, 2);
    assert_eq!(&half * &half.inv().unwrap(), GaussianRational::from_int(1));
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn parser_round_trip(p in poly(5, 4)) {
        let text = p.to_string();
        prop_assert_eq!(polyhull::parse::parse_polynomial(&text).unwrap(), p, "{}", text);
    }
}
