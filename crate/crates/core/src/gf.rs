//! Factored rational generating functions whose `xⁿyⁿtⁿ` diagonal counts the walks.
//!
//! Both models share the numerator `(b²x − ay²)(bx² − a²y)(xy − ab)/(a³b³)` and
//! the denominator `H₀·H₁·H₂·xy` with `H₀ = 1 − t·xy·S(1/x, 1/y)`,
//! `H₁ = 1 − x`, `H₂ = 1 − y`.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{Model, ModelKind, Weights};
use crate::poly::{Exponent, Poly, X, Y};

/// Largest diagonal index served by [`diagonal_coefficient`] by default.
pub const DEFAULT_SERIES_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredRational {
    pub kind: ModelKind,
    pub weights: Weights,
    /// `(b²x − ay²)`, `(bx² − a²y)`, `(xy − ab)`.
    pub numerator_factors: Vec<Poly>,
    /// `1/(a³b³)`.
    pub scalar: BigRational,
    /// `[H₀, H₁, H₂]`.
    pub denominator_factors: [Poly; 3],
    /// The monomial `x·y` in the denominator.
    pub monomial: Exponent,
}

fn c(q: BigRational, e: Exponent) -> Poly {
    Poly::monomial(q, e)
}

/// The factored generating function for a model and weight pair.
pub fn build_gf(kind: ModelKind, weights: &Weights) -> FactoredRational {
    let a = weights.a().clone();
    let b = weights.b().clone();
    let f1 = &c(&b * &b, [1, 0, 0]) - &c(a.clone(), [0, 2, 0]);
    let f2 = &c(b.clone(), [2, 0, 0]) - &c(&a * &a, [0, 1, 0]);
    let f3 = &c(BigRational::one(), [1, 1, 0]) - &c(&a * &b, [0, 0, 0]);
    let scalar = num_traits::Inv::inv((&a * &b).pow(3));
    let model = Model::new(kind, weights.clone());
    let cleared = model.inventory().cleared_kernel();
    let h0 = &Poly::one() - &cleared.shift([0, 0, 1]);
    let h1 = &Poly::one() - &Poly::var(X);
    let h2 = &Poly::one() - &Poly::var(Y);
    FactoredRational {
        kind,
        weights: weights.clone(),
        numerator_factors: vec![f1, f2, f3],
        scalar,
        denominator_factors: [h0, h1, h2],
        monomial: [1, 1, 0],
    }
}

impl FactoredRational {
    /// `G(x, y)`: the product of the numerator factors (without the scalar).
    pub fn numerator_product(&self) -> Poly {
        self.numerator_factors
            .iter()
            .fold(Poly::one(), |acc, f| &acc * f)
    }

    /// The full polynomial denominator `H₀·a³b³·(1 − x)·x·(1 − y)·y`.
    pub fn denominator_product(&self) -> Poly {
        let [h0, h1, h2] = &self.denominator_factors;
        let scale = num_traits::Inv::inv(self.scalar.clone());
        (h0 * h1).scale(&scale).shift(self.monomial) * h2.clone()
    }

    pub fn h0(&self) -> &Poly {
        &self.denominator_factors[0]
    }

    /// Diagonal coefficients `[xⁿyⁿtⁿ]F` for `n = 0..=n_max`.
    pub fn diagonal_series(&self, n_max: usize) -> Vec<BigRational> {
        // [xⁿyⁿtⁿ]F = scalar·[x^(n+1) y^(n+1) tⁿ] G/(H₀H₁H₂)
        let dims = [n_max + 1, n_max + 1, n_max];
        let inv_h0 = SeriesBox::from_poly(self.h0(), dims).reciprocal();
        let mut body = SeriesBox::from_poly(&self.numerator_product(), dims).mul(&inv_h0);
        body.divide_by_one_minus(X);
        body.divide_by_one_minus(Y);
        (0..=n_max)
            .map(|n| &self.scalar * body.get([n + 1, n + 1, n]))
            .collect()
    }
}

/// `[xⁿyⁿtⁿ]F` with the default cap.
pub fn diagonal_coefficient(fr: &FactoredRational, n: usize) -> Result<BigRational> {
    diagonal_coefficient_capped(fr, n, DEFAULT_SERIES_CAP)
}

pub fn diagonal_coefficient_capped(
    fr: &FactoredRational,
    n: usize,
    cap: usize,
) -> Result<BigRational> {
    if n > cap {
        return Err(Error::SeriesCap { requested: n, cap });
    }
    Ok(fr.diagonal_series(n).pop().unwrap())
}

/// Dense power series in `(x, y, t)` truncated at orders `(Nx, Ny, Nt)` inclusive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesBox {
    orders: [usize; 3],
    data: Vec<BigRational>,
}

impl SeriesBox {
    pub fn zero(orders: [usize; 3]) -> Self {
        let len = (orders[0] + 1) * (orders[1] + 1) * (orders[2] + 1);
        SeriesBox {
            orders,
            data: vec![BigRational::zero(); len],
        }
    }

    /// Truncates a polynomial; panics on negative exponents.
    pub fn from_poly(p: &Poly, orders: [usize; 3]) -> Self {
        let mut s = SeriesBox::zero(orders);
        for (e, v) in p.terms() {
            assert!(
                e.iter().all(|&d| d >= 0),
                "series boxes hold power series only"
            );
            let e = [e[0] as usize, e[1] as usize, e[2] as usize];
            if s.contains(e) {
                let i = s.index(e);
                s.data[i] += v;
            }
        }
        s
    }

    pub fn orders(&self) -> [usize; 3] {
        self.orders
    }

    fn contains(&self, e: [usize; 3]) -> bool {
        e[0] <= self.orders[0] && e[1] <= self.orders[1] && e[2] <= self.orders[2]
    }

    fn index(&self, e: [usize; 3]) -> usize {
        (e[2] * (self.orders[1] + 1) + e[1]) * (self.orders[0] + 1) + e[0]
    }

    fn exponents(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        let [nx, ny, nt] = self.orders;
        (0..=nt).flat_map(move |k| (0..=ny).flat_map(move |j| (0..=nx).map(move |i| [i, j, k])))
    }

    fn nonzero(&self) -> Vec<([usize; 3], BigRational)> {
        self.exponents()
            .filter_map(|e| {
                let v = &self.data[self.index(e)];
                (!v.is_zero()).then(|| (e, v.clone()))
            })
            .collect()
    }

    pub fn get(&self, e: [usize; 3]) -> BigRational {
        if self.contains(e) {
            self.data[self.index(e)].clone()
        } else {
            BigRational::zero()
        }
    }

    /// Truncated product; the result has `self`'s orders.
    pub fn mul(&self, other: &SeriesBox) -> SeriesBox {
        let mut out = SeriesBox::zero(self.orders);
        let lhs = self.nonzero();
        let rhs = other.nonzero();
        for (e, u) in &lhs {
            for (f, v) in &rhs {
                let g = [e[0] + f[0], e[1] + f[1], e[2] + f[2]];
                if out.contains(g) {
                    let i = out.index(g);
                    out.data[i] += u * v;
                }
            }
        }
        out
    }

    /// Truncated reciprocal of a series with a nonzero constant term.
    pub fn reciprocal(&self) -> SeriesBox {
        let h0 = self.get([0, 0, 0]);
        assert!(!h0.is_zero(), "reciprocal needs a unit constant term");
        let inv0 = num_traits::Inv::inv(h0);
        let terms: Vec<_> = self
            .nonzero()
            .into_iter()
            .filter(|(e, _)| *e != [0, 0, 0])
            .collect();
        let mut out = SeriesBox::zero(self.orders);
        // Lexicographic order in (t, y, x) visits e − f before e.
        let all: Vec<[usize; 3]> = self.exponents().collect();
        for e in all {
            let mut acc = if e == [0, 0, 0] {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            for (f, v) in &terms {
                if f[0] <= e[0] && f[1] <= e[1] && f[2] <= e[2] {
                    let r = &out.data[out.index([e[0] - f[0], e[1] - f[1], e[2] - f[2]])];
                    if !r.is_zero() {
                        acc -= v * r;
                    }
                }
            }
            let i = out.index(e);
            out.data[i] = acc * &inv0;
        }
        out
    }

    /// Multiplies by `1/(1 − var)`: prefix sums along one axis.
    pub fn divide_by_one_minus(&mut self, var: usize) {
        let all: Vec<[usize; 3]> = self.exponents().collect();
        for e in all {
            if e[var] > 0 {
                let mut prev = e;
                prev[var] -= 1;
                let p = self.data[self.index(prev)].clone();
                let i = self.index(e);
                self.data[i] += p;
            }
        }
    }
}

#[cfg(test)]
fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::q_series;

    fn w(an: i64, ad: i64, bn: i64, bd: i64) -> Weights {
        Weights::from_fractions(an, ad, bn, bd).unwrap()
    }

    #[test]
    fn unit_weight_numerator() {
        let fr = build_gf(ModelKind::Tandem, &w(1, 1, 1, 1));
        let x = Poly::var(X);
        let y = Poly::var(Y);
        let one = Poly::one();
        let expect = (&x - &y.pow(2)) * (&x.pow(2) - &y) * (&(&x * &y) - &one);
        assert_eq!(fr.numerator_product(), expect);
        assert!(fr.scalar.is_one());
    }

    #[test]
    fn kernel_factor_after_clearing() {
        let fr = build_gf(ModelKind::Tandem, &w(2, 1, 3, 1));
        // 1 − t(ay + bx²/a + xy²/b)
        let expect = Poly::from_terms([
            ([0, 0, 0], rational(1, 1)),
            ([0, 1, 1], rational(-2, 1)),
            ([2, 0, 1], rational(-3, 2)),
            ([1, 2, 1], rational(-1, 3)),
        ]);
        assert_eq!(fr.h0(), &expect);
        let dt = build_gf(ModelKind::DoubleTandem, &w(1, 1, 1, 1));
        assert_eq!(dt.h0().terms().count(), 7);
        assert!(dt.h0().is_polynomial());
        assert_eq!(dt.h0().coeff([1, 1, 1]), BigRational::zero());
        assert_eq!(dt.h0().coeff([2, 1, 1]), rational(-1, 1));
    }

    #[test]
    fn first_coefficients() {
        let fr = build_gf(ModelKind::Tandem, &w(1, 1, 1, 1));
        assert_eq!(diagonal_coefficient(&fr, 0).unwrap(), rational(1, 1));
        assert_eq!(diagonal_coefficient(&fr, 3).unwrap(), rational(4, 1));
        assert_eq!(
            diagonal_coefficient(&fr, 17),
            Err(Error::SeriesCap {
                requested: 17,
                cap: 16
            })
        );
    }

    #[test]
    fn matches_oracle() {
        let weights = w(1, 2, 1, 3);
        let fr = build_gf(ModelKind::Tandem, &weights);
        let qs = q_series(ModelKind::Tandem, &weights, 8).unwrap();
        let diag = fr.diagonal_series(8);
        assert_eq!(Some(diag), qs.dense());
        let weights = w(3, 2, 2, 5);
        let fr = build_gf(ModelKind::DoubleTandem, &weights);
        let qs = q_series(ModelKind::DoubleTandem, &weights, 6).unwrap();
        assert_eq!(Some(fr.diagonal_series(6)), qs.dense());
    }

    #[test]
    fn reciprocal_inverts() {
        let fr = build_gf(ModelKind::DoubleTandem, &w(2, 1, 1, 3));
        let h = SeriesBox::from_poly(fr.h0(), [4, 4, 3]);
        let prod = h.mul(&h.reciprocal());
        assert_eq!(prod, SeriesBox::from_poly(&Poly::one(), [4, 4, 3]));
    }

    #[test]
    fn geometric_division() {
        let mut s = SeriesBox::from_poly(&Poly::one(), [3, 2, 0]);
        s.divide_by_one_minus(X);
        s.divide_by_one_minus(Y);
        assert_eq!(s.get([3, 2, 0]), rational(1, 1));
        let direct = SeriesBox::from_poly(&Poly::one(), [3, 2, 0])
            .mul(&SeriesBox::from_poly(&(&Poly::one() - &Poly::var(X)), [3, 2, 0]).reciprocal());
        assert_eq!(direct.get([2, 0, 0]), rational(1, 1));
        assert_eq!(direct.get([2, 1, 0]), rational(0, 1));
    }
}
