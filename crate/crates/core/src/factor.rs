//! Factorization into irreducibles over Q(i) for desk-scale degrees.
//!
//! Pipeline: monomial part, content in `z1`, square-free decomposition,
//! then each square-free piece is split by a generic shear
//! `z2 <- y + lambda*z1 + a`, an exact univariate factorization of the
//! `y = 0` image, multifactor Hensel lifting in `y`, and recombination by
//! exact trial division.
//!
//! The univariate splitting is guided by floating-point roots: candidate
//! factors are products of root subsets, rounded to Gaussian integers by
//! Gauss's lemma and accepted only after exact division.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::PolyError;
use crate::gaussian::GaussianRational;
use crate::gcd::{content_z1, gcd, normalize};
use crate::poly::{BiPoly, Var};
use crate::roots;
use crate::upoly::UPoly;

pub const DEFAULT_MAX_DEGREE: u32 = 16;

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Factor {
    pub poly: BiPoly,
    pub multiplicity: u32,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FactorList {
    pub unit: GaussianRational,
    pub factors: Vec<Factor>,
}

impl FactorList {
    /// `unit * prod factor^multiplicity`.
    pub fn expand(&self) -> BiPoly {
        self.factors.iter().fold(BiPoly::constant(self.unit.clone()), |acc, f| {
            &acc * &f.poly.pow(f.multiplicity)
        })
    }

    pub fn polys(&self) -> impl Iterator<Item = &BiPoly> {
        self.factors.iter().map(|f| &f.poly)
    }

    /// Product of the distinct factors, each once.
    pub fn squarefree_part(&self) -> BiPoly {
        self.polys().fold(BiPoly::one(), |acc, p| &acc * p)
    }

    pub fn contains_associate_of(&self, p: &BiPoly) -> bool {
        let n = normalize(p);
        self.polys().any(|f| *f == n)
    }
}

impl fmt::Display for FactorList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.unit)?;
        for fac in &self.factors {
            write!(f, " * ({})", fac.poly)?;
            if fac.multiplicity > 1 {
                write!(f, "^{}", fac.multiplicity)?;
            }
        }
        Ok(())
    }
}

pub fn factor_irreducible(a: &BiPoly) -> Result<FactorList, PolyError> {
    factor_irreducible_with_bound(a, DEFAULT_MAX_DEGREE)
}

pub fn factor_irreducible_with_bound(a: &BiPoly, max_degree: u32) -> Result<FactorList, PolyError> {
    if a.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let degree = a.total_degree();
    if degree > max_degree {
        return Err(PolyError::DegreeTooLarge { degree, bound: max_degree });
    }
    let mut factors: Vec<Factor> = Vec::new();

    let mono = a.monomial_content();
    if mono.e1 > 0 {
        factors.push(Factor { poly: BiPoly::z1(), multiplicity: mono.e1 });
    }
    if mono.e2 > 0 {
        factors.push(Factor { poly: BiPoly::z2(), multiplicity: mono.e2 });
    }
    let rest = a.div_monomial(mono);

    if !rest.is_constant() {
        let content = content_z1(&rest);
        if content.degree() > 0 {
            for (g, m) in factor_univariate(&content)? {
                factors.push(Factor { poly: normalize(&g.to_bipoly(Var::Z2)), multiplicity: m });
            }
        }
        let pp = rest
            .divide_exact(&content.to_bipoly(Var::Z2))
            .map_err(|_| PolyError::FactorizationFailed("content does not divide".into()))?;
        for (piece, m) in squarefree_z1(&pp)? {
            for g in split_squarefree(&piece)? {
                factors.push(Factor { poly: normalize(&g), multiplicity: m });
            }
        }
    }

    factors.sort_by(|x, y| {
        y.poly
            .total_degree()
            .cmp(&x.poly.total_degree())
            .then_with(|| x.poly.to_string().cmp(&y.poly.to_string()))
    });
    let unit = factors.iter().fold(a.leading_coeff(), |acc, f| {
        &acc / &f.poly.leading_coeff().pow(f.multiplicity)
    });
    let out = FactorList { unit, factors };
    if out.expand() != *a {
        return Err(PolyError::FactorizationFailed("round-trip check failed".into()));
    }
    Ok(out)
}

/// Yun's square-free decomposition with respect to `z1` for a polynomial
/// that is primitive in `z1`. Returns `(piece, multiplicity)` with
/// non-constant pieces only.
fn squarefree_z1(f: &BiPoly) -> Result<Vec<(BiPoly, u32)>, PolyError> {
    let mut out = Vec::new();
    if f.is_constant() {
        return Ok(out);
    }
    let df = f.partial_derivative(Var::Z1);
    let b = gcd(f, &df)?;
    let mut c = f.divide_exact(&b)?;
    let mut d = &df.divide_exact(&b)? - &c.partial_derivative(Var::Z1);
    let mut i = 1;
    while !c.is_constant() {
        let a = gcd(&c, &d)?;
        c = c.divide_exact(&a)?;
        d = &d.divide_exact(&a)? - &c.partial_derivative(Var::Z1);
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    Ok(out)
}

/// Univariate factorization over Q(i): monic irreducible factors with
/// multiplicities.
pub fn factor_univariate(u: &UPoly) -> Result<Vec<(UPoly, u32)>, PolyError> {
    let mut out = Vec::new();
    if u.degree() == 0 {
        return Ok(out);
    }
    // Yun.
    let du = u.derivative();
    let b = u.gcd(&du);
    let mut c = u.div_rem(&b).0;
    let mut d = du.div_rem(&b).0.sub(&c.derivative());
    let mut i = 1;
    while c.degree() > 0 {
        let a = c.gcd(&d);
        c = c.div_rem(&a).0;
        d = d.div_rem(&a).0.sub(&c.derivative());
        if a.degree() > 0 {
            for g in split_univariate(&a)? {
                out.push((g, i));
            }
        }
        i += 1;
    }
    Ok(out)
}

/// Scales to Gaussian-integer coefficients.
fn to_gaussian_integers(u: &UPoly) -> UPoly {
    let lcm = u
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(&c.denom_lcm()));
    u.scale(&GaussianRational::real(BigRational::from_integer(lcm)))
}

fn round_gaussian_integer(z: Complex64) -> Option<GaussianRational> {
    let tol = 1e-6 * (1.0 + z.norm());
    if tol >= 0.25 {
        return None;
    }
    let (re, im) = (z.re.round(), z.im.round());
    if (z - Complex64::new(re, im)).norm() > tol.max(1e-4) {
        return None;
    }
    Some(GaussianRational::from_ints(re as i64, im as i64))
}

fn poly_from_roots(roots: &[Complex64], scale: Complex64) -> Vec<Complex64> {
    let mut c = vec![scale];
    for r in roots {
        let mut next = vec![Complex64::zero(); c.len() + 1];
        for (i, a) in c.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= a * r;
        }
        c = next;
    }
    c
}

/// Splits a square-free univariate polynomial into monic irreducibles.
fn split_univariate(u: &UPoly) -> Result<Vec<UPoly>, PolyError> {
    let deg = u.degree();
    if deg <= 1 {
        return Ok(vec![u.monic()]);
    }
    let mut remaining = to_gaussian_integers(u);
    let coeffs = remaining.monic().to_complex();
    let mut roots: Vec<Complex64> = roots::aberth(&coeffs, 0x5eed)
        .map_err(|e| PolyError::FactorizationFailed(format!("univariate roots: {e}")))?;
    let mut out = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= roots.len() {
        let lc = remaining.lc().to_complex();
        let n = roots.len();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let subset: Vec<Complex64> = idx.iter().map(|&k| roots[k]).collect();
            let numeric = poly_from_roots(&subset, lc);
            let rounded: Option<Vec<GaussianRational>> =
                numeric.iter().map(|&z| round_gaussian_integer(z)).collect();
            if let Some(rc) = rounded {
                let cand = UPoly::new(rc).monic();
                if cand.degree() == size {
                    let (q, r) = remaining.div_rem(&cand);
                    if r.is_zero() {
                        out.push(cand);
                        remaining = to_gaussian_integers(&q);
                        let mut keep = Vec::with_capacity(n - size);
                        for (k, z) in roots.iter().enumerate() {
                            if !idx.contains(&k) {
                                keep.push(*z);
                            }
                        }
                        roots = keep;
                        continue 'outer;
                    }
                }
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
        size += 1;
    }
    if remaining.degree() > 0 {
        out.push(remaining.monic());
    }
    Ok(out)
}

/// Advances `idx` to the next k-combination of `0..n` in lex order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Truncated power series in `y` with coefficients in Q(i)[x].
type Series = Vec<UPoly>;

fn series_of(f: &BiPoly) -> Series {
    // x = z1, y = z2
    f.coeffs_in(Var::Z2)
        .iter()
        .map(|c| UPoly::from_bipoly(c, Var::Z1).expect("coefficient in z1 only"))
        .collect()
}

fn bipoly_of(s: &Series) -> BiPoly {
    let coeffs: Vec<BiPoly> = s.iter().map(|c| c.to_bipoly(Var::Z1)).collect();
    BiPoly::from_coeffs_in(Var::Z2, &coeffs)
}

fn series_mul(a: &Series, b: &Series, prec: usize) -> Series {
    let mut out = vec![UPoly::zero(); prec];
    for (i, ai) in a.iter().enumerate().take(prec) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j >= prec {
                break;
            }
            out[i + j] = out[i + j].add(&ai.mul(bj));
        }
    }
    out
}

/// Shear candidates `(lambda, a)`, simplest first.
fn shear_candidates() -> impl Iterator<Item = (i64, i64)> {
    let small = [0i64, 1, -1, 2, -2, 3, -3, 5, -5, 7];
    small
        .into_iter()
        .flat_map(move |lam| small.into_iter().map(move |a| (lam, a)))
}

/// Splits a square-free polynomial, primitive in `z1` and free of monomial
/// factors, into irreducibles (not normalized).
fn split_squarefree(f: &BiPoly) -> Result<Vec<BiPoly>, PolyError> {
    if f.total_degree() <= 1 {
        return Ok(vec![f.clone()]);
    }
    for (lam, a) in shear_candidates() {
        let lam_q = GaussianRational::from_int(lam);
        let a_q = GaussianRational::from_int(a);
        // z2 = y + lam*x + a
        let shifted_z2 = &(&BiPoly::z2() + &BiPoly::z1().scale(&lam_q)) + &BiPoly::constant(a_q.clone());
        let g = f.compose(&BiPoly::z1(), &shifted_z2);
        let lead = g.coeffs_in(Var::Z1).pop().expect("nonzero");
        let Some(lc) = lead.constant_value() else {
            continue;
        };
        let big = g.scale(&lc.inv().expect("nonzero"));
        let series = series_of(&big);
        let f0 = series[0].clone();
        if f0.degree() as u32 != big.deg_z1() || f0.gcd(&f0.derivative()).degree() > 0 {
            continue;
        }
        let pieces = lift_and_recombine(&big, &series, &f0)?;
        // back-substitute y = z2 - lam*z1 - a
        let back_z2 = &(&BiPoly::z2() - &BiPoly::z1().scale(&lam_q)) - &BiPoly::constant(a_q);
        return Ok(pieces
            .iter()
            .map(|p| p.compose(&BiPoly::z1(), &back_z2))
            .collect());
    }
    Err(PolyError::FactorizationFailed("no admissible shear found".into()))
}

fn lift_and_recombine(big: &BiPoly, series: &Series, f0: &UPoly) -> Result<Vec<BiPoly>, PolyError> {
    let uni = split_univariate(f0)?;
    if uni.len() == 1 {
        return Ok(vec![big.clone()]);
    }
    let prec = big.deg_z2() as usize + 1;
    let lifted = hensel_lift(series, &uni, prec)?;

    let mut remaining_poly = big.clone();
    let mut remaining: Vec<BiPoly> = lifted.iter().map(bipoly_of).collect();
    let mut found = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= remaining.len() {
        let n = remaining.len();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let mut prod: Series = vec![UPoly::one()];
            for &k in &idx {
                prod = series_mul(&prod, &series_of(&remaining[k]), prec);
            }
            let cand = bipoly_of(&prod);
            if let Ok(q) = remaining_poly.divide_exact(&cand) {
                found.push(cand);
                remaining_poly = q;
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(k, _)| !idx.contains(k))
                    .map(|(_, p)| p)
                    .collect();
                continue 'outer;
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
        size += 1;
    }
    if !remaining_poly.is_constant() {
        found.push(remaining_poly);
    }
    Ok(found)
}

/// Multifactor linear Hensel lifting of monic coprime factors of `F(x, 0)`
/// to factors of `F` modulo `y^prec`.
fn hensel_lift(f: &Series, factors: &[UPoly], prec: usize) -> Result<Vec<Series>, PolyError> {
    let r = factors.len();
    let mut bezout = Vec::with_capacity(r);
    for i in 0..r {
        let others = factors
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .fold(UPoly::one(), |acc, (_, g)| acc.mul(g));
        let s = others
            .inverse_mod(&factors[i])
            .ok_or_else(|| PolyError::FactorizationFailed("factors not coprime".into()))?;
        bezout.push(s);
    }
    let mut lifted: Vec<Series> = factors.iter().map(|g| vec![g.clone()]).collect();
    for k in 1..prec {
        let prod = lifted
            .iter()
            .fold(vec![UPoly::one()], |acc, g| series_mul(&acc, g, k + 1));
        let target = f.get(k).cloned().unwrap_or_else(UPoly::zero);
        let err = target.sub(prod.get(k).unwrap_or(&UPoly::zero()));
        if err.is_zero() {
            for g in lifted.iter_mut() {
                g.push(UPoly::zero());
            }
            continue;
        }
        for (i, g) in lifted.iter_mut().enumerate() {
            let delta = err.mul(&bezout[i]).rem(&factors[i]);
            g.push(delta);
        }
    }
    Ok(lifted)
}

/// Expands a list of (irreducible, multiplicity) pairs; test helper and
/// convenience for callers assembling polynomials from known factors.
pub fn product_of(factors: &[(BiPoly, u32)]) -> BiPoly {
    factors
        .iter()
        .fold(BiPoly::one(), |acc, (p, m)| &acc * &p.pow(*m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z1() -> BiPoly {
        BiPoly::z1()
    }
    fn z2() -> BiPoly {
        BiPoly::z2()
    }
    fn c(v: i64) -> BiPoly {
        BiPoly::constant(GaussianRational::from_int(v))
    }

    fn factor_set(fl: &FactorList) -> Vec<String> {
        let mut v: Vec<String> = fl.polys().map(|p| p.to_string()).collect();
        v.sort();
        v
    }

    #[test]
    fn first_worked_example_delta_factors() {
        let q1 = &(z1() + z2()) - &(&z1() * &z2());
        let q2 = &(z1() + z2()) + &(&z1() * &z2());
        let q3 = z2() - z1();
        let n = &(&q1 * &q2) * &q3;
        let fl = factor_irreducible(&n).unwrap();
        assert_eq!(fl.factors.len(), 3);
        assert!(fl.contains_associate_of(&q1));
        assert!(fl.contains_associate_of(&q2));
        assert!(fl.contains_associate_of(&q3));
        assert_eq!(fl.expand(), n);
        assert_eq!(fl.unit, GaussianRational::one());
    }

    #[test]
    fn third_worked_example_factors() {
        let q1 = &z1() + &(&c(2) * &z2().pow(2));
        let n = &(&q1 * &(&c(3) * &z1())) * &(&c(-6) * &z2());
        let fl = factor_irreducible(&n).unwrap();
        assert_eq!(factor_set(&fl), vec!["2*z2^2 + z1", "z1", "z2"]);
        assert_eq!(fl.unit, GaussianRational::from_int(-18));
    }

    #[test]
    fn difference_of_squares() {
        let fl = factor_irreducible(&(&z1().pow(2) - &z2().pow(2))).unwrap();
        assert_eq!(factor_set(&fl), vec!["z1 + z2", "z1 - z2"]);
    }

    #[test]
    fn gaussian_split() {
        // z1^2 + z2^2 = (z1 + i z2)(z1 - i z2)
        let fl = factor_irreducible(&(&z1().pow(2) + &z2().pow(2))).unwrap();
        assert_eq!(fl.factors.len(), 2);
        assert!(fl.contains_associate_of(&(&z1() + &BiPoly::term(GaussianRational::i(), 0, 1))));
        assert!(fl.contains_associate_of(&(&z1() - &BiPoly::term(GaussianRational::i(), 0, 1))));
        // z1^2 - 2 z2^2 stays irreducible over Q(i)
        let p = &z1().pow(2) - &(&c(2) * &z2().pow(2));
        assert_eq!(factor_irreducible(&p).unwrap().factors.len(), 1);
    }

    #[test]
    fn multiplicities_and_content() {
        let a = &(z1() + z2()).pow(3) * &(&(&z2() + &c(1)).pow(2) * &z1().pow(2));
        let fl = factor_irreducible(&a).unwrap();
        let mut got: Vec<(String, u32)> = fl
            .factors
            .iter()
            .map(|f| (f.poly.to_string(), f.multiplicity))
            .collect();
        got.sort();
        assert_eq!(
            got,
            vec![("z1".into(), 2), ("z1 + z2".into(), 3), ("z2 + 1".into(), 2)]
        );
    }

    #[test]
    fn irreducible_higher_degree() {
        let p = &(&z1().pow(3) + &z2().pow(2)) + &(&z1() * &z2());
        let fl = factor_irreducible(&p).unwrap();
        assert_eq!(fl.factors.len(), 1);
        let q = &(&z1().pow(2) * &z2() - c(1)) * &(&z2().pow(3) + &z1());
        let fl = factor_irreducible(&q).unwrap();
        assert_eq!(fl.factors.len(), 2);
        assert_eq!(fl.expand(), q);
    }

    #[test]
    fn degree_bound() {
        let p = z1().pow(17) + c(1);
        assert_eq!(
            factor_irreducible(&p),
            Err(PolyError::DegreeTooLarge { degree: 17, bound: 16 })
        );
        assert_eq!(factor_irreducible(&BiPoly::zero()), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn univariate_split() {
        let u = UPoly::new(vec![GaussianRational::from_int(-1), GaussianRational::zero(), GaussianRational::zero(), GaussianRational::zero(), GaussianRational::one()]);
        // x^4 - 1 = (x-1)(x+1)(x-i)(x+i)
        let f = factor_univariate(&u).unwrap();
        assert_eq!(f.len(), 4);
    }
}
