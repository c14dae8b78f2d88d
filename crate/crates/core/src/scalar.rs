use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::real::{Complex, Real};
use crate::surd::Surd;

/// Minimal field interface used to evaluate polynomials over several number types.
///
/// Constants are created "like" an existing value so that context such as the
/// working precision or a jet shape travels with the data.
pub trait Scalar: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn lift(&self, q: &BigRational) -> Self;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn recip(&self) -> Self;

    fn powi(&self, k: i32) -> Self {
        let mut base = if k < 0 { self.recip() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            base = base.times(&base);
            e >>= 1;
        }
        acc
    }
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn lift(&self, q: &BigRational) -> Self {
        q.clone()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn recip(&self) -> Self {
        num_traits::Inv::inv(self.clone())
    }
}

impl Scalar for Surd {
    fn zero_like(&self) -> Self {
        Surd::from_integer(0)
    }
    fn one_like(&self) -> Self {
        Surd::from_integer(1)
    }
    fn lift(&self, q: &BigRational) -> Self {
        Surd::from_rational(q.clone())
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.clone() + rhs.clone()
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.clone() - rhs.clone()
    }
    fn times(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }
    fn recip(&self) -> Self {
        Surd::recip(self)
    }
}

impl Scalar for Real {
    fn zero_like(&self) -> Self {
        Real::zero(self.precision())
    }
    fn one_like(&self) -> Self {
        Real::one(self.precision())
    }
    fn lift(&self, q: &BigRational) -> Self {
        Real::from_ratio(q, self.precision())
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn recip(&self) -> Self {
        Real::recip(self)
    }
}

impl Scalar for Complex {
    fn zero_like(&self) -> Self {
        Complex::zero(self.precision())
    }
    fn one_like(&self) -> Self {
        Complex::one(self.precision())
    }
    fn lift(&self, q: &BigRational) -> Self {
        Complex::from_ratio(q, self.precision())
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn recip(&self) -> Self {
        Complex::recip(self)
    }
}

impl Scalar for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn one_like(&self) -> Self {
        1.0
    }
    fn lift(&self, q: &BigRational) -> Self {
        crate::ratio_to_f64(q)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn recip(&self) -> Self {
        1.0 / self
    }
}
