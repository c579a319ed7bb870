#![allow(dead_code)]

use num_rational::BigRational;
use proptest::prelude::*;

use polyhull::gaussian::GaussianRational;
use polyhull::hull::ProblemSpec;
use polyhull::parse::{parse_in, Alphabet};
use polyhull::poly::{BiPoly, Monomial};

pub fn z(text: &str) -> BiPoly {
    parse_in(text, Alphabet::Z).unwrap()
}

pub fn w(text: &str) -> BiPoly {
    parse_in(text, Alphabet::W).unwrap()
}

/// The four worked examples, in order.
pub const FIXTURES: [(&str, &str, &str); 4] = [
    ("z1+z2", "z1*z2", "w1+w2"),
    ("z1+z2", "z1*z2", "w1+2*w2"),
    ("2*z1+z2^2", "z1-z2^2", "w1-w2"),
    ("2*z1+z2^2", "z1-z2^2", "w1+2*w2"),
];

pub fn fixture(k: usize) -> ProblemSpec {
    let (p1, p2, data) = FIXTURES[k];
    ProblemSpec::new(z(p1), z(p2), w(data)).unwrap().with_seed(7)
}

pub fn coefficient() -> impl Strategy<Value = GaussianRational> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(|(a, b, c, d)| {
        GaussianRational::new(BigRational::new(a.into(), b.into()), BigRational::new(c.into(), d.into()))
    })
}

/// Random polynomial with at most `terms` terms and partial degrees `<= max_deg`.
pub fn poly(terms: usize, max_deg: u32) -> impl Strategy<Value = BiPoly> {
    prop::collection::vec((coefficient(), 0..=max_deg, 0..=max_deg), 0..=terms)
        .prop_map(|ts| BiPoly::from_terms(ts.into_iter().map(|(c, a, b)| (Monomial::new(a, b), c))))
}

pub fn nonzero_poly(terms: usize, max_deg: u32) -> impl Strategy<Value = BiPoly> {
    poly(terms, max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

/// Small integer-coefficient polynomial of positive degree.
pub fn small_factor() -> impl Strategy<Value = BiPoly> {
    prop::collection::vec((-3i64..=3, 0u32..=2, 0u32..=2), 1..=4)
        .prop_map(|ts| BiPoly::from_int_terms(&ts))
        .prop_filter("non-constant", |p| !p.is_constant())
}
