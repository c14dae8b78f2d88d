//! Quadratic surds `q0 + q1·√d` with rational `q0`, `q1` and an integer radicand.
//!
//! Every closed form the walk models need (growth rates, critical points, drift
//! components) lives in `Q(√a)` or `Q(√b)`, so one radicand per value is enough.
//! Signs and comparisons are decided exactly; values in different quadratic
//! fields are compared with [`Surd::cmp_exact`].

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::real::Real;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    rational: BigRational,
    coeff: BigRational,
    /// Positive and not a perfect square; `1` whenever `coeff` is zero.
    radicand: BigInt,
}

fn perfect_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

/// Splits `n > 0` as `s²·d` with small square factors pulled into `s`.
fn extract_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut s = BigInt::one();
    let mut d = n.clone();
    let mut p = 2u32;
    while p < 1000 {
        let pp = BigInt::from(p * p);
        if pp > d {
            break;
        }
        while (&d % &pp).is_zero() {
            d /= &pp;
            s *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if let Some(r) = perfect_sqrt(&d) {
        return (s * r, BigInt::one());
    }
    (s, d)
}

fn q_sign(q: &BigRational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

impl Surd {
    pub fn from_rational(q: BigRational) -> Self {
        Surd {
            rational: q,
            coeff: BigRational::zero(),
            radicand: BigInt::one(),
        }
    }

    pub fn from_integer(v: i64) -> Self {
        Surd::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// `q0 + q1·√d`, normalized.
    pub fn new(q0: BigRational, q1: BigRational, d: BigRational) -> Self {
        assert!(!d.is_negative(), "negative radicand");
        let root = Surd::sqrt_of(&d);
        Surd::from_rational(q0) + root * Surd::from_rational(q1)
    }

    /// Exact square root of a non-negative rational.
    pub fn sqrt_of(q: &BigRational) -> Self {
        assert!(!q.is_negative(), "square root of a negative rational");
        if q.is_zero() {
            return Surd::from_rational(BigRational::zero());
        }
        // √(n/d) = √(n·d)/d
        let prod = q.numer() * q.denom();
        let (s, d) = extract_square(&prod);
        let c = BigRational::new(s, q.denom().clone());
        if d.is_one() {
            Surd::from_rational(c)
        } else {
            Surd {
                rational: BigRational::zero(),
                coeff: c,
                radicand: d,
            }
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeff.is_zero() {
            Some(&self.rational)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.coeff.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_zero() && self.rational.is_one()
    }

    fn normalized(mut self) -> Self {
        if self.coeff.is_zero() {
            self.radicand = BigInt::one();
        }
        self
    }

    /// Re-expresses `other` over `self`'s radicand when both generate the same field.
    fn align(&self, other: &Surd) -> Option<(BigInt, BigRational, BigRational)> {
        if self.coeff.is_zero() {
            return Some((
                other.radicand.clone(),
                other.rational.clone(),
                other.coeff.clone(),
            ));
        }
        if other.coeff.is_zero() || other.radicand == self.radicand {
            return Some((
                self.radicand.clone(),
                other.rational.clone(),
                other.coeff.clone(),
            ));
        }
        // √d2 = (s/d1)·√d1 when d1·d2 = s².
        let s = perfect_sqrt(&(&self.radicand * &other.radicand))?;
        let factor = BigRational::new(s, self.radicand.clone());
        Some((
            self.radicand.clone(),
            other.rational.clone(),
            &other.coeff * factor,
        ))
    }

    fn combine(
        &self,
        other: &Surd,
    ) -> (BigInt, BigRational, BigRational, BigRational, BigRational) {
        let (d, r2, c2) = self.align(other).unwrap_or_else(|| {
            panic!(
                "surds over different fields: √{} and √{}",
                self.radicand, other.radicand
            )
        });
        if self.coeff.is_zero() {
            (d, self.rational.clone(), BigRational::zero(), r2, c2)
        } else {
            (d, self.rational.clone(), self.coeff.clone(), r2, c2)
        }
    }

    /// Whether `self` and `other` can be combined arithmetically.
    pub fn same_field(&self, other: &Surd) -> bool {
        self.align(other).is_some()
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let s0 = q_sign(&self.rational);
        let s1 = q_sign(&self.coeff);
        if s1 == 0 {
            return s0;
        }
        if s0 == 0 || s0 == s1 {
            return s1;
        }
        let lhs = &self.rational * &self.rational;
        let rhs = &self.coeff * &self.coeff * BigRational::from_integer(self.radicand.clone());
        match lhs.cmp(&rhs) {
            Ordering::Greater => s0,
            Ordering::Less => s1,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn abs(&self) -> Surd {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Exact comparison, also across different quadratic fields.
    pub fn cmp_exact(&self, other: &Surd) -> Ordering {
        if self.same_field(other) {
            return (self.clone() - other.clone()).signum().cmp(&0);
        }
        // self − other = X − Y with X = (p − r) + q√A and Y = s√B.
        let x = Surd {
            rational: &self.rational - &other.rational,
            coeff: self.coeff.clone(),
            radicand: self.radicand.clone(),
        };
        let sx = x.signum();
        let sy = q_sign(&other.coeff);
        if sx != sy {
            return sx.cmp(&sy);
        }
        if sx == 0 {
            return Ordering::Equal;
        }
        let y2 = &other.coeff * &other.coeff * BigRational::from_integer(other.radicand.clone());
        let diff = x.clone() * x - Surd::from_rational(y2);
        let s = diff.signum() * sx;
        s.cmp(&0)
    }

    pub fn recip(&self) -> Surd {
        assert!(!self.is_zero(), "reciprocal of zero");
        let d = BigRational::from_integer(self.radicand.clone());
        let norm = &self.rational * &self.rational - &self.coeff * &self.coeff * d;
        Surd {
            rational: &self.rational / &norm,
            coeff: -(&self.coeff / &norm),
            radicand: self.radicand.clone(),
        }
        .normalized()
    }

    pub fn pow(&self, k: i32) -> Surd {
        let mut base = if k < 0 { self.recip() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Surd::from_integer(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    pub fn to_real(&self, prec: u32) -> Real {
        let r = Real::from_ratio(&self.rational, prec);
        if self.coeff.is_zero() {
            return r;
        }
        let root = Real::from_bigint(&self.radicand, prec + 8).sqrt();
        let c = Real::from_ratio(&self.coeff, prec + 8);
        (r + c * root).with_precision(prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_real(80).to_f64()
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, rhs: Surd) -> Surd {
        let (d, r1, c1, r2, c2) = self.combine(&rhs);
        Surd {
            rational: r1 + r2,
            coeff: c1 + c2,
            radicand: d,
        }
        .normalized()
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        self + (-rhs)
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        let (d, r1, c1, r2, c2) = self.combine(&rhs);
        let dq = BigRational::from_integer(d.clone());
        Surd {
            rational: &r1 * &r2 + &c1 * &c2 * dq,
            coeff: r1 * c2 + c1 * r2,
            radicand: d,
        }
        .normalized()
    }
}

impl Div for Surd {
    type Output = Surd;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Surd) -> Surd {
        self * rhs.recip()
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            rational: -self.rational,
            coeff: -self.coeff,
            radicand: self.radicand,
        }
    }
}

fn fmt_ratio(q: &BigRational) -> alloc::string::String {
    use alloc::format;
    if q.is_integer() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            return write!(f, "{}", fmt_ratio(&self.rational));
        }
        let root = alloc::format!("sqrt({})", self.radicand);
        let c = self.coeff.abs();
        let term = if c.is_one() {
            root
        } else {
            alloc::format!("{}*{}", fmt_ratio(&c), root)
        };
        if self.rational.is_zero() {
            if self.coeff.is_negative() {
                write!(f, "-{term}")
            } else {
                write!(f, "{term}")
            }
        } else {
            let op = if self.coeff.is_negative() { '-' } else { '+' };
            write!(f, "{} {op} {term}", fmt_ratio(&self.rational))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn square_roots_fold_to_rationals() {
        assert_eq!(Surd::sqrt_of(&q(4, 9)), Surd::from_rational(q(2, 3)));
        let s = Surd::sqrt_of(&q(1, 2));
        assert_eq!(s.radicand(), &BigInt::from(2));
        assert_eq!(s.surd_part(), &q(1, 2));
    }

    #[test]
    fn field_arithmetic() {
        let r2 = Surd::sqrt_of(&q(2, 1));
        let x = Surd::from_integer(3) + r2.clone();
        let y = x.recip();
        assert!((x * y).is_one());
        assert_eq!((r2.clone() * r2).as_rational(), Some(&q(2, 1)));
    }

    #[test]
    fn aligned_radicands() {
        // √8 and √2 share a field.
        let a = Surd {
            rational: q(0, 1),
            coeff: q(1, 1),
            radicand: BigInt::from(2),
        };
        let b = Surd::sqrt_of(&q(8, 1));
        assert_eq!((b - a.clone() - a).signum(), 0);
    }

    #[test]
    fn exact_sign_near_cancellation() {
        // 1.4142... vs 99/70 = 1.414285...
        let d = Surd::sqrt_of(&q(2, 1)) - Surd::from_rational(q(99, 70));
        assert_eq!(d.signum(), -1);
        let d = Surd::sqrt_of(&q(2, 1)) - Surd::from_rational(q(140, 99));
        assert_eq!(d.signum(), 1);
    }

    #[test]
    fn compare_across_fields() {
        let r2 = Surd::sqrt_of(&q(2, 1));
        let r3 = Surd::sqrt_of(&q(3, 1));
        assert_eq!(r2.cmp_exact(&r3), Ordering::Less);
        let x = Surd::from_integer(1) + r2.clone();
        assert_eq!(x.cmp_exact(&r3), Ordering::Greater);
        let neg = -r3.clone();
        assert_eq!(neg.cmp_exact(&(-r2)), Ordering::Less);
    }

    #[test]
    fn display_forms() {
        let x = Surd::from_integer(2) + Surd::sqrt_of(&q(2, 1));
        assert_eq!(alloc::format!("{x}"), "2 + sqrt(2)");
        let y = Surd::from_rational(q(1, 2)) - Surd::sqrt_of(&q(3, 4));
        assert_eq!(alloc::format!("{y}"), "1/2 - 1/2*sqrt(3)");
    }
}
