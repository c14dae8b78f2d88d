//! Binary floating point with a big-integer mantissa and a per-value precision.
//!
//! Values are `man · 2^exp` with `|man| < 2^prec` after rounding. Results of
//! binary operations carry the larger of the two operand precisions, so a
//! computation started at some precision stays there. Rounding is to nearest
//! on the magnitude.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 106;
/// Smallest accepted precision.
pub const MIN_PRECISION: u32 = 53;
/// Largest accepted precision.
pub const MAX_PRECISION: u32 = 1 << 16;

#[derive(Clone, Debug)]
pub struct Real {
    man: BigInt,
    exp: i64,
    prec: u32,
}

fn bits(m: &BigInt) -> i64 {
    m.bits() as i64
}

impl Real {
    pub fn zero(prec: u32) -> Self {
        Real {
            man: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn one(prec: u32) -> Self {
        Real::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Real {
            man: BigInt::from(v),
            exp: 0,
            prec,
        }
        .round()
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Real {
            man: v.clone(),
            exp: 0,
            prec,
        }
        .round()
    }

    /// Exact conversion of a finite `f64` (then rounded to `prec`).
    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "non-finite f64");
        if v == 0.0 {
            return Real::zero(prec);
        }
        let raw = v.to_bits();
        let sign = raw >> 63;
        let e = ((raw >> 52) & 0x7ff) as i64;
        let frac = raw & ((1u64 << 52) - 1);
        let (m, e) = if e == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), e - 1075)
        };
        let mut man = BigInt::from(m);
        if sign == 1 {
            man = -man;
        }
        Real { man, exp: e, prec }.round()
    }

    pub fn from_ratio(q: &BigRational, prec: u32) -> Self {
        let n = Real {
            man: q.numer().clone(),
            exp: 0,
            prec: prec + 8,
        };
        let d = Real {
            man: q.denom().clone(),
            exp: 0,
            prec: prec + 8,
        };
        let mut r = n.div_exact_prec(&d, prec + 8);
        r.prec = prec;
        r.round()
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Same value, rounded (or padded) to a new precision.
    pub fn with_precision(&self, prec: u32) -> Self {
        Real {
            man: self.man.clone(),
            exp: self.exp,
            prec,
        }
        .round()
    }

    fn round(mut self) -> Self {
        if self.man.is_zero() {
            self.exp = 0;
            return self;
        }
        let nb = bits(&self.man);
        let p = self.prec as i64;
        if nb > p {
            let sh = (nb - p) as u64;
            let neg = self.man.is_negative();
            let mut mag = self.man.magnitude().clone();
            let half = BigUint::one() << (sh - 1);
            mag += half;
            mag >>= sh;
            self.man = BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, mag);
            self.exp += sh as i64;
            if bits(&self.man) > p {
                self.man >>= 1u32;
                self.exp += 1;
            }
        }
        // Strip trailing zero bits so equal values share a representation.
        let tz = self.man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.man >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Real {
            man: self.man.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// Position of the leading bit: `|self|` lies in `[2^(m-1), 2^m)`.
    pub fn magnitude_bits(&self) -> i64 {
        if self.is_zero() {
            i64::MIN / 4
        } else {
            self.exp + bits(&self.man)
        }
    }

    fn add_signed(&self, other: &Real, negate_other: bool) -> Real {
        let prec = self.prec.max(other.prec);
        let rhs_man = if negate_other {
            -&other.man
        } else {
            other.man.clone()
        };
        if other.is_zero() {
            return Real {
                man: self.man.clone(),
                exp: self.exp,
                prec,
            }
            .round();
        }
        if self.is_zero() {
            return Real {
                man: rhs_man,
                exp: other.exp,
                prec,
            }
            .round();
        }
        let top_s = self.magnitude_bits();
        let top_o = other.magnitude_bits();
        let guard = prec as i64 + 4;
        if top_s - top_o > guard {
            return Real {
                man: self.man.clone(),
                exp: self.exp,
                prec,
            }
            .round();
        }
        if top_o - top_s > guard {
            return Real {
                man: rhs_man,
                exp: other.exp,
                prec,
            }
            .round();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << ((self.exp - e) as u64);
        let b = rhs_man << ((other.exp - e) as u64);
        Real {
            man: a + b,
            exp: e,
            prec,
        }
        .round()
    }

    fn mul_real(&self, other: &Real) -> Real {
        let prec = self.prec.max(other.prec);
        Real {
            man: &self.man * &other.man,
            exp: self.exp + other.exp,
            prec,
        }
        .round()
    }

    fn div_exact_prec(&self, other: &Real, prec: u32) -> Real {
        assert!(!other.is_zero(), "division by zero");
        if self.is_zero() {
            return Real::zero(prec);
        }
        let shift = (prec as i64 + 2 + bits(&other.man) - bits(&self.man)).max(0);
        let num = &self.man << (shift as u64);
        let q = num.div_floor(&other.man);
        Real {
            man: q,
            exp: self.exp - shift - other.exp,
            prec,
        }
        .round()
    }

    pub fn recip(&self) -> Real {
        Real::one(self.prec).div_exact_prec(self, self.prec)
    }

    pub fn sqrt(&self) -> Real {
        assert!(!self.is_negative(), "square root of a negative number");
        if self.is_zero() {
            return self.clone();
        }
        let p = self.prec as i64;
        let mut s = (2 * p + 4 - bits(&self.man)).max(0);
        if (self.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let m = self.man.magnitude() << (s as u64);
        let r = m.sqrt();
        Real {
            man: BigInt::from(r),
            exp: (self.exp - s) / 2,
            prec: self.prec,
        }
        .round()
    }

    pub fn powi(&self, k: i32) -> Real {
        let mut base = if k < 0 { self.recip() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Real::one(self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_real(&base);
            }
            base = base.mul_real(&base);
            e >>= 1;
        }
        acc
    }

    pub fn mul_pow2(&self, k: i64) -> Real {
        if self.is_zero() {
            return self.clone();
        }
        Real {
            man: self.man.clone(),
            exp: self.exp + k,
            prec: self.prec,
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // Keep 64 leading bits, then scale.
        let nb = bits(&self.man);
        let (m, e) = if nb > 64 {
            (&self.man >> ((nb - 64) as u64), self.exp + nb - 64)
        } else {
            (self.man.clone(), self.exp)
        };
        let mf = m.to_f64().unwrap_or(0.0);
        scale_f64(mf, e)
    }

    /// Natural logarithm as an `f64` (enough for growth-rate fitting).
    pub fn ln_f64(&self) -> f64 {
        assert!(
            !self.is_negative() && !self.is_zero(),
            "log of a non-positive number"
        );
        let nb = bits(&self.man);
        let keep = nb.min(64);
        let m = (&self.man >> ((nb - keep) as u64)).to_f64().unwrap_or(1.0);
        let e = self.exp + nb - keep;
        libm::log(m) + (e as f64) * core::f64::consts::LN_2
    }

    /// π to the given precision by Machin's formula.
    pub fn pi(prec: u32) -> Real {
        let work = prec as u64 + 32;
        let one = BigInt::one() << work;
        let atan_inv = |k: u64| -> BigInt {
            let k2 = BigInt::from(k * k);
            let mut power = &one / BigInt::from(k);
            let mut sum = BigInt::zero();
            let mut i = 0u64;
            while !power.is_zero() {
                let term = &power / BigInt::from(2 * i + 1);
                if i.is_multiple_of(2) {
                    sum += term;
                } else {
                    sum -= term;
                }
                power /= &k2;
                i += 1;
            }
            sum
        };
        let v = atan_inv(5) * 16 - atan_inv(239) * 4;
        Real {
            man: v,
            exp: -(work as i64),
            prec,
        }
        .round()
    }

    /// Sign-aware comparison.
    pub fn cmp_real(&self, other: &Real) -> Ordering {
        self.add_signed(other, true).signum().cmp(&0)
    }

    /// Exact rational value of the stored float.
    pub fn to_ratio(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << (self.exp as u64))
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << ((-self.exp) as u64))
        }
    }
}

fn scale_f64(m: f64, e: i64) -> f64 {
    // Scale in steps so intermediate powers of two stay finite.
    let mut v = m;
    let mut e = e;
    while e > 1000 {
        v *= libm::ldexp(1.0, 1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= libm::ldexp(1.0, -1000);
        e += 1000;
    }
    v * libm::ldexp(1.0, e as i32)
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.man == other.man && (self.man.is_zero() || self.exp == other.exp)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a Real> for &'a Real {
            type Output = Real;
            fn $m(self, rhs: &'a Real) -> Real {
                let f: fn(&Real, &Real) -> Real = $body;
                f(self, rhs)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &'a Real) -> Real {
                (&self).$m(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_signed(b, false));
forward_binop!(Sub, sub, |a, b| a.add_signed(b, true));
forward_binop!(Mul, mul, |a, b| a.mul_real(b));
forward_binop!(Div, div, |a, b| a.div_exact_prec(b, a.prec.max(b.prec)));

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real {
            man: -self.man,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real {
            man: -&self.man,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

/// Complex number over [`Real`].
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn from_real(re: Real) -> Self {
        let prec = re.precision();
        Complex {
            re,
            im: Real::zero(prec),
        }
    }

    pub fn zero(prec: u32) -> Self {
        Complex {
            re: Real::zero(prec),
            im: Real::zero(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        Complex {
            re: Real::one(prec),
            im: Real::zero(prec),
        }
    }

    pub fn i(prec: u32) -> Self {
        Complex {
            re: Real::zero(prec),
            im: Real::one(prec),
        }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Complex {
            re: Real::from_f64(re, prec),
            im: Real::from_f64(im, prec),
        }
    }

    pub fn from_ratio(q: &BigRational, prec: u32) -> Self {
        Complex::from_real(Real::from_ratio(q, prec))
    }

    pub fn precision(&self) -> u32 {
        self.re.precision().max(self.im.precision())
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Complex {
            re: self.re.with_precision(prec),
            im: self.im.with_precision(prec),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Complex {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    /// Cheap magnitude for threshold tests.
    pub fn abs_f64(&self) -> f64 {
        libm::hypot(self.re.to_f64(), self.im.to_f64())
    }

    pub fn scale(&self, s: &Real) -> Self {
        Complex {
            re: &self.re * s,
            im: &self.im * s,
        }
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        Complex {
            re: &self.re / &d,
            im: -(&self.im / &d),
        }
    }

    /// Principal square root (branch cut on the negative real axis).
    pub fn sqrt(&self) -> Self {
        let prec = self.precision();
        if self.is_zero() {
            return Complex::zero(prec);
        }
        let m = self.abs();
        let two = Real::from_i64(2, prec);
        let re = ((&m + &self.re) / &two).sqrt();
        let mut im = ((&m - &self.re) / &two).sqrt();
        if self.im.is_negative() {
            im = -im;
        }
        Complex { re, im }
    }

    pub fn powi(&self, k: i32) -> Self {
        let mut base = if k < 0 { self.recip() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Complex::one(self.precision());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `e^{iθ}` for an `f64` angle known only to double precision.
    pub fn cis_f64(theta: f64, prec: u32) -> Self {
        Complex::from_f64(libm::cos(theta), libm::sin(theta), prec)
    }

    /// Unit root `e^{2πik/3}` at full precision.
    pub fn cube_root_of_unity(k: i32, prec: u32) -> Self {
        match k.rem_euclid(3) {
            0 => Complex::one(prec),
            r => {
                let half = Real::from_i64(-1, prec).mul_pow2(-1);
                let s = Real::from_i64(3, prec).sqrt().mul_pow2(-1);
                Complex {
                    re: half,
                    im: if r == 1 { s } else { -s },
                }
            }
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}{:+e}i", self.re.to_f64(), self.im.to_f64())
    }
}

impl<'a> Add<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn add(self, rhs: &'a Complex) -> Complex {
        Complex {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn sub(self, rhs: &'a Complex) -> Complex {
        Complex {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn mul(self, rhs: &'a Complex) -> Complex {
        Complex {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'a> Div<&'a Complex> for &'a Complex {
    type Output = Complex;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &'a Complex) -> Complex {
        self * &rhs.recip()
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, rhs: Complex) -> Complex {
        &self + &rhs
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, rhs: Complex) -> Complex {
        &self - &rhs
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, rhs: Complex) -> Complex {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: f64) -> Real {
        Real::from_f64(v, DEFAULT_PRECISION)
    }

    #[test]
    fn arithmetic_matches_f64() {
        let a = r(1.75);
        let b = r(-0.3);
        assert_eq!((&a + &b).to_f64(), 1.75 + -0.3);
        assert_eq!((&a * &b).to_f64(), 1.75 * -0.3);
        assert!(((&a / &b).to_f64() - 1.75 / -0.3).abs() < 1e-15);
    }

    #[test]
    fn sqrt_two_squared() {
        let two = Real::from_i64(2, 200);
        let s = two.sqrt();
        let err = (&s * &s - two).abs();
        assert!(err.magnitude_bits() < -190);
    }

    #[test]
    fn pi_digits() {
        let p = Real::pi(300);
        let q = BigRational::new(
            "314159265358979323846264338327950288419716939937510"
                .parse()
                .unwrap(),
            BigInt::from(10u32).pow(50),
        );
        let diff = (p - Real::from_ratio(&q, 300)).abs();
        assert!(diff.magnitude_bits() < -160);
    }

    #[test]
    fn ratio_round_trip() {
        let q = BigRational::new(BigInt::from(1), BigInt::from(3));
        let v = Real::from_ratio(&q, 120);
        let back = v.to_ratio();
        let err = (back - q).abs();
        assert!(err < BigRational::new(BigInt::one(), BigInt::one() << 119u32));
    }

    #[test]
    fn complex_sqrt_principal() {
        let z = Complex::from_f64(-4.0, 0.0, 106);
        let s = z.sqrt();
        assert_eq!(s.to_f64(), (0.0, 2.0));
        let w = Complex::from_f64(3.0, -4.0, 106).sqrt();
        let (re, im) = w.to_f64();
        assert!((re - 2.0).abs() < 1e-15 && (im + 1.0).abs() < 1e-15);
    }

    #[test]
    fn cancellation_keeps_small_difference() {
        let a = r(1.0);
        let tiny = Real::one(106).mul_pow2(-100);
        let b = &a + &tiny;
        let d = b - a;
        assert_eq!(d.to_f64(), libm::ldexp(1.0, -100));
    }

    #[test]
    fn cube_roots_multiply_to_one() {
        let w = Complex::cube_root_of_unity(1, 106);
        let w3 = w.powi(3);
        assert!((w3.re.to_f64() - 1.0).abs() < 1e-30);
        assert!(w3.im.to_f64().abs() < 1e-30);
    }
}
