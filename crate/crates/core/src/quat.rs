//! Quaternion scalars `a0 + a1 i + a2 j + a3 k` over a [`Real`] backend.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{QError, Result};
use crate::scalar::{format_rational, Rational, Real};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Quaternion<T> {
    pub a0: T,
    pub a1: T,
    pub a2: T,
    pub a3: T,
}

impl<T: Real> Quaternion<T> {
    pub fn new(a0: T, a1: T, a2: T, a3: T) -> Self {
        Quaternion { a0, a1, a2, a3 }
    }

    pub fn zero() -> Self {
        Self::real(T::zero())
    }

    pub fn one() -> Self {
        Self::real(T::one())
    }

    pub fn i() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn j() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn k() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    pub fn real(a0: T) -> Self {
        Quaternion {
            a0,
            a1: T::zero(),
            a2: T::zero(),
            a3: T::zero(),
        }
    }

    /// Integer components, mostly for tests and fixtures.
    pub fn from_ints(a0: i64, a1: i64, a2: i64, a3: i64) -> Self {
        Self::new(T::from_i64(a0), T::from_i64(a1), T::from_i64(a2), T::from_i64(a3))
    }

    pub fn components(&self) -> [&T; 4] {
        [&self.a0, &self.a1, &self.a2, &self.a3]
    }

    pub fn conj(&self) -> Self {
        Quaternion {
            a0: self.a0.clone(),
            a1: -self.a1.clone(),
            a2: -self.a2.clone(),
            a3: -self.a3.clone(),
        }
    }

    /// `a0² + a1² + a2² + a3²`.
    pub fn norm_sqr(&self) -> T {
        self.a0.clone() * self.a0.clone()
            + self.a1.clone() * self.a1.clone()
            + self.a2.clone() * self.a2.clone()
            + self.a3.clone() * self.a3.clone()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().to_f64().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.a0.is_zero() && self.a1.is_zero() && self.a2.is_zero() && self.a3.is_zero()
    }

    /// True when the vector part vanishes (exactly on rationals, within `tol * scale` on floats).
    pub fn is_real(&self, scale: f64, tol: f64) -> bool {
        self.a1.is_negligible(scale, tol)
            && self.a2.is_negligible(scale, tol)
            && self.a3.is_negligible(scale, tol)
    }

    pub fn is_negligible(&self, scale: f64, tol: f64) -> bool {
        self.a0.is_negligible(scale, tol) && self.is_real(scale, tol)
    }

    pub fn scale(&self, s: &T) -> Self {
        Quaternion {
            a0: self.a0.clone() * s.clone(),
            a1: self.a1.clone() * s.clone(),
            a2: self.a2.clone() * s.clone(),
            a3: self.a3.clone() * s.clone(),
        }
    }

    /// Multiplicative inverse `conj(q) / |q|²`.
    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(QError::ZeroDivision);
        }
        let r = T::one() / n;
        Ok(self.conj().scale(&r))
    }

    /// Divides every component by a real scalar.
    pub fn div_real(&self, d: &T) -> Result<Self> {
        if d.is_zero() {
            return Err(QError::ZeroDivision);
        }
        let r = T::one() / d.clone();
        Ok(self.scale(&r))
    }

    pub fn map<U: Real>(&self, f: impl Fn(&T) -> U) -> Quaternion<U> {
        Quaternion {
            a0: f(&self.a0),
            a1: f(&self.a1),
            a2: f(&self.a2),
            a3: f(&self.a3),
        }
    }

    pub fn to_f64(&self) -> Quaternion<f64> {
        self.map(|x| x.to_f64())
    }

    /// Distance `|p - q|` as a float.
    pub fn dist(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
}

impl Quaternion<f64> {
    pub fn lift<T: Real>(&self) -> Result<Quaternion<T>> {
        let c = |x: f64| T::from_f64(x).ok_or(QError::NonFinite);
        Ok(Quaternion::new(c(self.a0)?, c(self.a1)?, c(self.a2)?, c(self.a3)?))
    }
}

fn hamilton<T: Real>(p: &Quaternion<T>, q: &Quaternion<T>) -> Quaternion<T> {
    let (a0, a1, a2, a3) = (&p.a0, &p.a1, &p.a2, &p.a3);
    let (b0, b1, b2, b3) = (&q.a0, &q.a1, &q.a2, &q.a3);
    let m = |x: &T, y: &T| x.clone() * y.clone();
    Quaternion {
        a0: m(a0, b0) - m(a1, b1) - m(a2, b2) - m(a3, b3),
        a1: m(a0, b1) + m(a1, b0) + m(a2, b3) - m(a3, b2),
        a2: m(a0, b2) - m(a1, b3) + m(a2, b0) + m(a3, b1),
        a3: m(a0, b3) + m(a1, b2) - m(a2, b1) + m(a3, b0),
    }
}

impl<T: Real> Mul for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn mul(self, rhs: &Quaternion<T>) -> Quaternion<T> {
        hamilton(self, rhs)
    }
}

impl<T: Real> Mul for Quaternion<T> {
    type Output = Quaternion<T>;
    fn mul(self, rhs: Quaternion<T>) -> Quaternion<T> {
        hamilton(&self, &rhs)
    }
}

impl<T: Real> Add for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn add(self, rhs: &Quaternion<T>) -> Quaternion<T> {
        Quaternion {
            a0: self.a0.clone() + rhs.a0.clone(),
            a1: self.a1.clone() + rhs.a1.clone(),
            a2: self.a2.clone() + rhs.a2.clone(),
            a3: self.a3.clone() + rhs.a3.clone(),
        }
    }
}

impl<T: Real> Add for Quaternion<T> {
    type Output = Quaternion<T>;
    fn add(self, rhs: Quaternion<T>) -> Quaternion<T> {
        &self + &rhs
    }
}

impl<T: Real> Sub for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn sub(self, rhs: &Quaternion<T>) -> Quaternion<T> {
        Quaternion {
            a0: self.a0.clone() - rhs.a0.clone(),
            a1: self.a1.clone() - rhs.a1.clone(),
            a2: self.a2.clone() - rhs.a2.clone(),
            a3: self.a3.clone() - rhs.a3.clone(),
        }
    }
}

impl<T: Real> Sub for Quaternion<T> {
    type Output = Quaternion<T>;
    fn sub(self, rhs: Quaternion<T>) -> Quaternion<T> {
        &self - &rhs
    }
}

impl<T: Real> AddAssign<&Quaternion<T>> for Quaternion<T> {
    fn add_assign(&mut self, rhs: &Quaternion<T>) {
        self.a0 = self.a0.clone() + rhs.a0.clone();
        self.a1 = self.a1.clone() + rhs.a1.clone();
        self.a2 = self.a2.clone() + rhs.a2.clone();
        self.a3 = self.a3.clone() + rhs.a3.clone();
    }
}

impl<T: Real> AddAssign for Quaternion<T> {
    fn add_assign(&mut self, rhs: Quaternion<T>) {
        *self += &rhs;
    }
}

impl<T: Real> SubAssign<&Quaternion<T>> for Quaternion<T> {
    fn sub_assign(&mut self, rhs: &Quaternion<T>) {
        self.a0 = self.a0.clone() - rhs.a0.clone();
        self.a1 = self.a1.clone() - rhs.a1.clone();
        self.a2 = self.a2.clone() - rhs.a2.clone();
        self.a3 = self.a3.clone() - rhs.a3.clone();
    }
}

impl<T: Real> Neg for Quaternion<T> {
    type Output = Quaternion<T>;
    fn neg(self) -> Quaternion<T> {
        Quaternion {
            a0: -self.a0,
            a1: -self.a1,
            a2: -self.a2,
            a3: -self.a3,
        }
    }
}

impl<T: Real> Neg for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn neg(self) -> Quaternion<T> {
        -self.clone()
    }
}

impl<T: Real> std::iter::Sum for Quaternion<T> {
    fn sum<I: Iterator<Item = Quaternion<T>>>(iter: I) -> Self {
        iter.fold(Quaternion::zero(), |acc, q| acc + q)
    }
}

/// Renders a real component; rationals print as reduced fractions.
pub trait ComponentFmt {
    fn fmt_component(&self) -> String;
}

impl ComponentFmt for f64 {
    fn fmt_component(&self) -> String {
        format!("{self}")
    }
}

impl ComponentFmt for Rational {
    fn fmt_component(&self) -> String {
        format_rational(self)
    }
}

impl<T: Real + ComponentFmt> fmt::Display for Quaternion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (c, unit) in [(&self.a0, ""), (&self.a1, "i"), (&self.a2, "j"), (&self.a3, "k")] {
            if c.is_zero() {
                continue;
            }
            let neg = *c < T::zero();
            let mag = c.abs_val().fmt_component();
            let mag = if !unit.is_empty() && mag == "1" { String::new() } else { mag };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&mag);
            out.push_str(unit);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.pad(&out)
    }
}
