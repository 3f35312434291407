//! Real-number backends.
//!
//! Determinantal formulas run on either backend; spectral routines (square
//! roots, eigendecompositions, SVD) run on `f64` only.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Default relative tolerance for approximate comparisons on the float backend.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Exact rational numbers with arbitrary-precision numerator and denominator.
pub type Rational = BigRational;

/// The ground field of the quaternion algebra.
pub trait Real:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static
{
    /// `true` for backends whose arithmetic is exact.
    const EXACT: bool;

    /// Short name used in reports.
    const NAME: &'static str;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Converts a finite float; returns `None` for NaN or infinities.
    fn from_f64(v: f64) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// Converts from an exact rational, rounding on inexact backends.
    fn from_rational(r: &Rational) -> Self;

    fn abs_val(&self) -> Self;

    /// Zero test. Exact backends ignore `scale` and `tol`; the float backend
    /// treats `|x| <= tol * scale` as zero.
    fn is_negligible(&self, scale: f64, tol: f64) -> bool;

    /// Equality under the same convention as [`Real::is_negligible`].
    fn approx_eq(&self, other: &Self, scale: f64, tol: f64) -> bool {
        (self.clone() - other.clone()).is_negligible(scale, tol)
    }
}

impl Real for f64 {
    const EXACT: bool = false;
    const NAME: &'static str = "float";

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_rational(r: &Rational) -> Self {
        <Rational as Real>::to_f64(r)
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn is_negligible(&self, scale: f64, tol: f64) -> bool {
        self.abs() <= tol * scale
    }
}

impl Real for BigRational {
    const EXACT: bool = true;
    const NAME: &'static str = "rational";

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // numerator/denominator too large for a direct conversion
            let n = self.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn is_negligible(&self, _scale: f64, _tol: f64) -> bool {
        self.is_zero()
    }
}

/// Parses `"p/q"`, `"p"`, or a decimal literal such as `"-0.25"` exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all.parse::<BigInt>().ok()?);
    let shift = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Some(if neg { -value } else { value })
}

/// Renders a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
