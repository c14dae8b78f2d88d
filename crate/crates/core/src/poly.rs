//! Sparse Laurent polynomials in `(x, y, t)` with rational coefficients.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Exponent vector over `(x, y, t)`.
pub type Exponent = [i32; 3];

pub const X: usize = 0;
pub const Y: usize = 1;
pub const T: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Exponent, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::monomial(c, [0, 0, 0])
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn monomial(c: BigRational, e: Exponent) -> Self {
        let mut p = Poly::zero();
        p.add_term(e, c);
        p
    }

    /// The variable with index `var`.
    pub fn var(var: usize) -> Self {
        let mut e = [0; 3];
        e[var] = 1;
        Poly::monomial(BigRational::one(), e)
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, BigRational)>>(it: I) -> Self {
        let mut p = Poly::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exponent, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: Exponent) -> BigRational {
        self.terms
            .get(&e)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(e, v)| (*e, v * c)))
    }

    /// Multiplies by the monomial with exponent `e`.
    pub fn shift(&self, e: Exponent) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .map(|(f, v)| ([f[0] + e[0], f[1] + e[1], f[2] + e[2]], v.clone())),
        )
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Smallest and largest exponent of `var`.
    pub fn degree_range(&self, var: usize) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|e| e[var]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))))
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&d| d >= 0))
    }

    /// Substitutes `var = value`.
    pub fn substitute(&self, var: usize, value: &BigRational) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let mut f = *e;
            f[var] = 0;
            out.add_term(f, c * value.powi(e[var]));
        }
        out
    }

    /// Replaces `var` by `c·var` (a rescaling of one coordinate).
    pub fn rescale(&self, var: usize, c: &BigRational) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(e, v)| (*e, v * c.powi(e[var]))))
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            if e[var] != 0 {
                let mut f = *e;
                f[var] -= 1;
                out.add_term(f, c * BigRational::from_integer(BigInt::from(e[var])));
            }
        }
        out
    }

    /// `var · ∂/∂var`, the logarithmic derivative operator.
    pub fn euler(&self, var: usize) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| (*e, c * BigRational::from_integer(BigInt::from(e[var])))),
        )
    }

    /// Exact quotient by `(var − 1)`; `None` when the division leaves a remainder.
    ///
    /// Works on Laurent polynomials: each slice in `var` is divided separately.
    pub fn div_by_var_minus_one(&self, var: usize) -> Option<Poly> {
        let mut slices: BTreeMap<Exponent, BTreeMap<i32, BigRational>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut key = *e;
            key[var] = 0;
            slices.entry(key).or_default().insert(e[var], c.clone());
        }
        let mut out = Poly::zero();
        for (key, slice) in slices {
            let lo = *slice.keys().next().unwrap();
            let hi = *slice.keys().next_back().unwrap();
            // Synthetic division from the top degree down.
            let mut carry = BigRational::zero();
            for d in (lo..=hi).rev() {
                carry += slice.get(&d).cloned().unwrap_or_else(BigRational::zero);
                if d == lo {
                    if !carry.is_zero() {
                        return None;
                    }
                } else {
                    let mut e = key;
                    e[var] = d - 1;
                    out.add_term(e, carry.clone());
                }
            }
        }
        Some(out)
    }

    /// Evaluates at `(x, y, t)` over any [`Scalar`] type.
    pub fn eval<S: Scalar>(&self, point: &[S; 3]) -> S {
        let proto = &point[0];
        let mut cache: [BTreeMap<i32, S>; 3] = Default::default();
        let mut acc = proto.zero_like();
        for (e, c) in &self.terms {
            let mut term = proto.lift(c);
            for v in 0..3 {
                if e[v] != 0 {
                    let p = cache[v]
                        .entry(e[v])
                        .or_insert_with(|| point[v].powi(e[v]))
                        .clone();
                    term = term.times(&p);
                }
            }
            acc = acc.plus(&term);
        }
        acc
    }

    /// Evaluates a polynomial in `(x, y)` only.
    pub fn eval2<S: Scalar>(&self, x: &S, y: &S) -> S {
        self.eval(&[x.clone(), y.clone(), x.one_like()])
    }

    /// Lowest total degree of the Taylor expansion at `(x0, y0)` (the order of vanishing).
    ///
    /// `is_zero` decides whether a Taylor coefficient vanishes. Returns `None`
    /// for the zero polynomial.
    pub fn vanishing_order<S: Scalar>(
        &self,
        x0: &S,
        y0: &S,
        is_zero: impl Fn(&S) -> bool,
    ) -> Option<u32> {
        let (lx, hx) = self.degree_range(X)?;
        let (ly, hy) = self.degree_range(Y)?;
        let bound = ((hx - lx) + (hy - ly)) as u32;
        for total in 0..=bound {
            for i in 0..=total {
                let mut d = self.clone();
                for _ in 0..i {
                    d = d.derivative(X);
                }
                for _ in 0..(total - i) {
                    d = d.derivative(Y);
                }
                if !d.is_zero() && !is_zero(&d.eval2(x0, y0)) {
                    return Some(total);
                }
            }
        }
        None
    }

    pub fn map_coeffs(&self, f: impl Fn(&BigRational) -> BigRational) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    pub fn exponents(&self) -> Vec<Exponent> {
        self.terms.keys().copied().collect()
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            for (f, d) in &rhs.terms {
                out.add_term([e[0] + f[0], e[1] + f[1], e[2] + f[2]], c * d);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.map_coeffs(|c| -c.clone())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn exact_division_by_var_minus_one() {
        // x³ − 1 = (x − 1)(x² + x + 1)
        let p = &Poly::var(X).pow(3) - &Poly::one();
        let d = p.div_by_var_minus_one(X).unwrap();
        let expect = &(&Poly::var(X).pow(2) + &Poly::var(X)) + &Poly::one();
        assert_eq!(d, expect);
        assert!((&Poly::var(X) + &Poly::one())
            .div_by_var_minus_one(X)
            .is_none());
    }

    #[test]
    fn laurent_division() {
        // (x − 1)·(1/x + y) divides back out.
        let f = &Poly::monomial(q(1), [-1, 0, 0]) + &Poly::var(Y);
        let g = &(&Poly::var(X) - &Poly::one()) * &f;
        assert_eq!(g.div_by_var_minus_one(X).unwrap(), f);
    }

    #[test]
    fn vanishing_order_of_cube() {
        let p = (&Poly::var(X) - &Poly::one()).pow(2) * (&Poly::var(Y) - &Poly::one());
        let one = q(1);
        assert_eq!(p.vanishing_order(&one, &one, |v| v.is_zero()), Some(3));
        assert_eq!(p.vanishing_order(&q(2), &one, |v| v.is_zero()), Some(1));
        assert_eq!(p.vanishing_order(&q(2), &q(3), |v| v.is_zero()), Some(0));
    }

    #[test]
    fn evaluation_with_negative_exponents() {
        let p = &Poly::monomial(q(3), [-1, 2, 0]) + &Poly::constant(q(1));
        let v = p.eval(&[q(2), q(3), q(1)]);
        assert_eq!(v, BigRational::new(BigInt::from(29), BigInt::from(2)));
    }
}
