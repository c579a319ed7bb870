//! Exact Gaussian rationals, the coefficient field Q(i).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A complex number `re + im*i` with arbitrary-precision rational parts.
///
/// Both parts are kept in lowest terms with positive denominators (this is
/// what `BigRational` guarantees), so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    pub fn from_int(value: i64) -> Self {
        Self::from_ints(value, 0)
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(BigRational::new(num.into(), den.into()), BigRational::zero())
    }

    pub fn real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|^2`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// Least common multiple of the two denominators.
    pub fn denom_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }

    /// Best Gaussian-rational approximation of `z` with both denominators
    /// bounded by `max_den`, provided it lies within `tol` of `z`.
    pub fn approximate(z: Complex64, max_den: u64, tol: f64) -> Option<Self> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return None;
        }
        let re = approximate_real(z.re, max_den)?;
        let im = approximate_real(z.im, max_den)?;
        let out = Self::new(re, im);
        if (out.to_complex() - z).norm() <= tol {
            Some(out)
        } else {
            None
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

/// Gaussian integer `(re, im)`.
pub type GaussInt = (BigInt, BigInt);

fn round_div(x: &BigInt, n: &BigInt) -> BigInt {
    // nearest integer to x / n for n > 0
    let two = BigInt::from(2);
    (x * &two + n).div_floor(&(n * &two))
}

/// Greatest common divisor in Z[i] by the Euclidean algorithm.
pub fn gauss_int_gcd(a: &GaussInt, b: &GaussInt) -> GaussInt {
    let mut x = a.clone();
    let mut y = b.clone();
    while !(y.0.is_zero() && y.1.is_zero()) {
        let n = &y.0 * &y.0 + &y.1 * &y.1;
        // x * conj(y)
        let pr = &x.0 * &y.0 + &x.1 * &y.1;
        let pi = &x.1 * &y.0 - &x.0 * &y.1;
        let q = (round_div(&pr, &n), round_div(&pi, &n));
        let r = (
            &x.0 - (&q.0 * &y.0 - &q.1 * &y.1),
            &x.1 - (&q.0 * &y.1 + &q.1 * &y.0),
        );
        x = y;
        y = r;
    }
    x
}

impl GaussianRational {
    pub fn from_gauss_int(z: &GaussInt) -> Self {
        Self::new(BigRational::from_integer(z.0.clone()), BigRational::from_integer(z.1.clone()))
    }

    /// `Some((re, im))` when both parts are integers.
    pub fn as_gauss_int(&self) -> Option<GaussInt> {
        if self.re.is_integer() && self.im.is_integer() {
            Some((self.re.to_integer(), self.im.to_integer()))
        } else {
            None
        }
    }

    /// The unit `u` in `{1, -1, i, -i}` such that `u * self` has positive
    /// real part and non-negative imaginary part.
    pub fn canonical_unit(&self) -> Self {
        let (re, im) = (&self.re, &self.im);
        if re.is_positive() && !im.is_negative() {
            Self::one()
        } else if !re.is_positive() && im.is_positive() {
            // i*(a+bi) = -b + ai
            -Self::i()
        } else if re.is_negative() && !im.is_positive() {
            -Self::one()
        } else {
            Self::i()
        }
    }
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Very large numerators and denominators: scale both down first.
    let n = r.numer();
    let d = r.denom();
    let shift = n.bits().max(d.bits()).saturating_sub(900);
    let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Continued-fraction rounding with denominator bound.
fn approximate_real(x: f64, max_den: u64) -> Option<BigRational> {
    if x == 0.0 {
        return Some(BigRational::zero());
    }
    let sign = x.signum();
    let mut v = x.abs();
    // Convergents h/k.
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut best: Option<(i128, i128)> = None;
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e18 {
            break;
        }
        let a = a as i128;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den as i128 {
            break;
        }
        best = Some((h2, k2));
        let frac = v - v.floor();
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
    }
    let (h, k) = best?;
    let num = BigInt::from(h) * BigInt::from(sign as i64);
    Some(BigRational::new(num, BigInt::from(k)))
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(v: BigRational) -> Self {
        Self::real(v)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    /// Panics on division by zero, like the integer types.
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        let inv = rhs.inv().expect("division of Gaussian rational by zero");
        self * &inv
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl GaussianRational {
    /// Rendering of `|self|` used as a term coefficient: returns `None` when
    /// the coefficient is `1` or `-1` (so it can be omitted before a
    /// monomial), otherwise the unsigned text and whether it is negative.
    pub(crate) fn term_parts(&self) -> (bool, Option<String>) {
        if self.im.is_zero() {
            let neg = self.re.is_negative();
            let a = self.re.abs();
            if a.is_one() {
                (neg, None)
            } else {
                (neg, Some(fmt_rat(&a)))
            }
        } else if self.re.is_zero() {
            let neg = self.im.is_negative();
            let b = self.im.abs();
            if b.is_one() {
                (neg, Some("i".to_string()))
            } else {
                (neg, Some(format!("{}*i", fmt_rat(&b))))
            }
        } else {
            (false, Some(format!("({self})")))
        }
    }
}

impl serde::Serialize for GaussianRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rat(&self.re));
        }
        let imag = {
            let b = self.im.abs();
            if b.is_one() {
                "i".to_string()
            } else {
                format!("{}*i", fmt_rat(&b))
            }
        };
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{imag}")
            } else {
                write!(f, "{imag}")
            }
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(f, "{}{}{}", fmt_rat(&self.re), sign, imag)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn zero_is_unique() {
        let a = GaussianRational::new(q(0, 5), q(0, -3));
        assert_eq!(a, GaussianRational::zero());
        assert!(a.is_zero());
    }

    #[test]
    fn lowest_terms_and_positive_denominator() {
        let a = GaussianRational::new(q(2, -4), q(6, 8));
        assert_eq!(a.re().denom(), &BigInt::from(2));
        assert_eq!(a.re().numer(), &BigInt::from(-1));
        assert_eq!(a.im().denom(), &BigInt::from(4));
    }

    #[test]
    fn field_ops() {
        let a = GaussianRational::new(q(1, 2), q(3, 1));
        let b = GaussianRational::from_ints(2, -1);
        let prod = &a * &b;
        // (1/2 + 3i)(2 - i) = 1 - i/2 + 6i + 3 = 4 + 11/2 i
        assert_eq!(prod, GaussianRational::new(q(4, 1), q(11, 2)));
        assert_eq!(&prod / &b, a);
        assert_eq!(GaussianRational::i().pow(2), GaussianRational::from_int(-1));
        assert!(GaussianRational::zero().inv().is_none());
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussianRational::new(q(1, 2), q(3, 1)).to_string(), "1/2+3*i");
        assert_eq!(GaussianRational::from_ints(0, -1).to_string(), "-i");
        assert_eq!(GaussianRational::from_ints(-2, 0).to_string(), "-2");
        assert_eq!(GaussianRational::new(q(0, 1), q(-1, 2)).to_string(), "-1/2*i");
    }

    #[test]
    fn gaussian_integer_gcd() {
        let g = |a: i64, b: i64| (BigInt::from(a), BigInt::from(b));
        // (1+i)(2+i) = 1+3i ; (1+i)(3) = 3+3i
        let d = gauss_int_gcd(&g(1, 3), &g(3, 3));
        let n = &d.0 * &d.0 + &d.1 * &d.1;
        assert_eq!(n, BigInt::from(2));
        for z in [GaussianRational::from_ints(2, 1), GaussianRational::from_ints(-2, 1), GaussianRational::from_ints(-1, -3), GaussianRational::from_ints(0, -4), GaussianRational::from_ints(3, -1)] {
            let w = &z * &z.canonical_unit();
            assert!(w.re().is_positive() && !w.im().is_negative(), "{z} -> {w}");
        }
    }

    #[test]
    fn rounding_recovers_small_rationals() {
        let z = Complex64::new(1.0 / 3.0, -2.5);
        let g = GaussianRational::approximate(z, 1_000_000, 1e-9).unwrap();
        assert_eq!(g, GaussianRational::new(q(1, 3), q(-5, 2)));
        assert!(GaussianRational::approximate(Complex64::new(std::f64::consts::PI, 0.0), 10, 1e-9).is_none());
    }
}
