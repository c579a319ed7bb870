//! Bivariate gcd over Q(i) by the primitive pseudo-remainder sequence in
//! `z1`, with coefficients in Q(i)[z2].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::PolyError;
use crate::gaussian::{gauss_int_gcd, GaussianRational};
use crate::poly::{BiPoly, Var};
use crate::upoly::UPoly;

/// Polynomial in `z1` whose coefficients are univariate in `z2`.
type Rec = Vec<UPoly>;

fn to_rec(p: &BiPoly) -> Rec {
    p.coeffs_in(Var::Z1)
        .iter()
        .map(|c| UPoly::from_bipoly(c, Var::Z2).expect("coefficient in z2 only"))
        .collect()
}

fn from_rec(r: &Rec) -> BiPoly {
    let coeffs: Vec<BiPoly> = r.iter().map(|c| c.to_bipoly(Var::Z2)).collect();
    BiPoly::from_coeffs_in(Var::Z1, &coeffs)
}

fn trim(r: &mut Rec) {
    while r.last().is_some_and(UPoly::is_zero) {
        r.pop();
    }
}

fn rec_content(r: &Rec) -> UPoly {
    r.iter().fold(UPoly::zero(), |g, c| g.gcd(c))
}

fn rec_div_scalar(r: &Rec, c: &UPoly) -> Rec {
    r.iter()
        .map(|a| {
            let (q, rem) = a.div_rem(c);
            debug_assert!(rem.is_zero());
            q
        })
        .collect()
}

fn rec_primitive(r: &Rec) -> Rec {
    let c = rec_content(r);
    if c.is_zero() {
        return r.clone();
    }
    rec_div_scalar(r, &c)
}

/// Pseudo-remainder of `a` by `b` in the variable `z1`.
fn prem(a: &Rec, b: &Rec) -> Rec {
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r = a.clone();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        // r <- lb*r - lr*z1^(dr-db)*b
        let shift = dr - db;
        let mut next: Rec = r.iter().map(|c| c.mul(&lb)).collect();
        for (k, bc) in b.iter().enumerate() {
            next[k + shift] = next[k + shift].sub(&bc.mul(&lr));
        }
        trim(&mut next);
        r = next;
    }
    r
}

/// Content of `p` as a polynomial in `z1`: the monic gcd of its
/// coefficients, a univariate polynomial in `z2`.
pub fn content_z1(p: &BiPoly) -> UPoly {
    rec_content(&to_rec(p))
}

/// Canonical associate: Gaussian-integer coefficients with gcd one, and
/// graded-lex leading coefficient in the sector `re > 0, im >= 0`.
pub fn normalize(p: &BiPoly) -> BiPoly {
    if p.is_zero() {
        return BiPoly::zero();
    }
    let lcm = p
        .terms()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(&c.denom_lcm()));
    let scaled = p.scale(&GaussianRational::real(BigRational::from_integer(lcm)));
    let g = scaled.terms().fold((BigInt::zero(), BigInt::zero()), |acc, (_, c)| {
        gauss_int_gcd(&acc, &c.as_gauss_int().expect("integral after scaling"))
    });
    let prim = scaled.scale(&GaussianRational::from_gauss_int(&g).inv().expect("nonzero content"));
    let u = prim.leading_coeff().canonical_unit();
    prim.scale(&u)
}

/// Greatest common divisor, normalized as in [`normalize`].
///
/// Contents in `z1` are split off first; the primitive parts go through an
/// evaluation/interpolation scheme in `z2` (univariate images at integer
/// points, scaled by the gcd of the leading coefficients, interpolated and
/// confirmed by exact division), with the primitive pseudo-remainder
/// sequence as a fallback.
pub fn gcd(a: &BiPoly, b: &BiPoly) -> Result<BiPoly, PolyError> {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => return Err(PolyError::BothZero),
        (true, false) => return Ok(normalize(b)),
        (false, true) => return Ok(normalize(a)),
        _ => {}
    }
    let ra = to_rec(a);
    let rb = to_rec(b);
    let content = rec_content(&ra).gcd(&rec_content(&rb));
    let x = rec_primitive(&ra);
    let y = rec_primitive(&rb);
    let g = if x.len() == 1 || y.len() == 1 {
        // one side has z1-degree zero: after removing contents it is a unit
        vec![UPoly::one()]
    } else {
        evaluation_gcd(&x, &y).unwrap_or_else(|| prs_gcd(x, y))
    };
    let g: Rec = g.iter().map(|c| c.mul(&content)).collect();
    Ok(normalize(&from_rec(&g)))
}

fn prs_gcd(mut x: Rec, mut y: Rec) -> Rec {
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while y.len() > 1 {
        let r = prem(&x, &y);
        x = y;
        if r.is_empty() {
            return rec_primitive(&x);
        }
        y = rec_primitive(&r);
    }
    // y has z1-degree zero: the primitive parts are coprime in z1.
    vec![UPoly::one()]
}

fn eval_rec(r: &Rec, t: &GaussianRational) -> UPoly {
    UPoly::new(r.iter().map(|c| c.eval(t)).collect())
}

/// Newton interpolation through `(points[k], values[k])`.
fn interpolate(points: &[GaussianRational], values: &[GaussianRational]) -> UPoly {
    let n = points.len();
    let mut dd: Vec<GaussianRational> = values.to_vec();
    for level in 1..n {
        for k in (level..n).rev() {
            let num = &dd[k] - &dd[k - 1];
            let den = &points[k] - &points[k - level];
            dd[k] = &num / &den;
        }
    }
    let mut out = UPoly::constant(dd[n - 1].clone());
    for k in (0..n - 1).rev() {
        out = out.mul(&UPoly::linear(points[k].clone())).add(&UPoly::constant(dd[k].clone()));
    }
    out
}

fn rec_divides(d: &Rec, f: &Rec) -> bool {
    from_rec(d).divides(&from_rec(f))
}

/// Gcd of two polynomials primitive in `z1`, each of positive `z1`-degree.
fn evaluation_gcd(x: &Rec, y: &Rec) -> Option<Rec> {
    let lx = x.last()?;
    let ly = y.last()?;
    let gamma = lx.gcd(ly);
    let deg_bound = (x.iter().map(UPoly::degree).max()?).min(y.iter().map(UPoly::degree).max()?) + gamma.degree();
    let needed = deg_bound + 1;
    let mut best_deg = usize::MAX;
    let mut points: Vec<GaussianRational> = Vec::new();
    let mut images: Vec<UPoly> = Vec::new();
    for k in 0..(4 * needed + 64) as i64 {
        let t = GaussianRational::from_int(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 });
        if lx.eval(&t).is_zero() || ly.eval(&t).is_zero() {
            continue;
        }
        let g = eval_rec(x, &t).gcd(&eval_rec(y, &t));
        let d = g.degree();
        if d == 0 {
            return Some(vec![UPoly::one()]);
        }
        if d > best_deg {
            continue;
        }
        if d < best_deg {
            best_deg = d;
            points.clear();
            images.clear();
        }
        images.push(g.scale(&gamma.eval(&t)));
        points.push(t);
        if points.len() >= needed {
            let h: Rec = (0..=best_deg)
                .map(|c| {
                    let vals: Vec<GaussianRational> = images.iter().map(|g| g.coeff(c)).collect();
                    interpolate(&points, &vals)
                })
                .collect();
            let h = rec_primitive(&h);
            if rec_divides(&h, x) && rec_divides(&h, y) {
                return Some(h);
            }
            // all images so far share an unlucky degree; keep sampling
            points.clear();
            images.clear();
            best_deg = best_deg.saturating_sub(1).max(1);
        }
    }
    None
}
