//! Truncated Taylor jets in one or two variables over arbitrary-precision complex numbers.
//!
//! Coefficients are stored by total degree: degree `d` occupies a contiguous
//! block, and inside a bivariate block the monomial `θ₁^{d−j} θ₂^j` sits at
//! offset `j`. Composite operations (`exp`, `log`, reciprocal) use the graded
//! recursions obtained from the Euler operator, so they never form powers.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::real::{Complex, Real};
use crate::scalar::Scalar;

/// Largest supported truncation order.
pub const MAX_ORDER: usize = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    arity: usize,
    order: usize,
    prec: u32,
    coeffs: Vec<Complex>,
}

fn offset(arity: usize, d: usize) -> usize {
    if arity == 1 {
        d
    } else {
        d * (d + 1) / 2
    }
}

fn block(arity: usize, d: usize) -> usize {
    if arity == 1 {
        1
    } else {
        d + 1
    }
}

impl Jet {
    pub fn zero(arity: usize, order: usize, prec: u32) -> Result<Self> {
        if !(1..=2).contains(&arity) {
            return Err(Error::Inconsistent(alloc::format!("jet arity {arity}")));
        }
        if order > MAX_ORDER {
            return Err(Error::OrderExhausted { order });
        }
        let len = offset(arity, order + 1);
        Ok(Jet {
            arity,
            order,
            prec,
            coeffs: vec![Complex::zero(prec); len],
        })
    }

    pub fn constant(c: Complex, arity: usize, order: usize) -> Result<Self> {
        let prec = c.precision();
        let mut j = Jet::zero(arity, order, prec)?;
        j.coeffs[0] = c;
        Ok(j)
    }

    /// `exp(i·θ_var)`.
    pub fn cis(var: usize, arity: usize, order: usize, prec: u32) -> Result<Self> {
        let mut j = Jet::zero(arity, order, prec)?;
        let mut term = Complex::one(prec);
        let i = Complex::i(prec);
        for d in 0..=order {
            let idx = if arity == 1 {
                d
            } else {
                offset(2, d) + if var == 1 { d } else { 0 }
            };
            j.coeffs[idx] = term.clone();
            term = &(&term * &i) / &Complex::from_real(Real::from_i64(d as i64 + 1, prec));
        }
        Ok(j)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Coefficient of `θ₁^i θ₂^j` (`j = 0` for univariate jets).
    pub fn coeff(&self, i: usize, j: usize) -> &Complex {
        &self.coeffs[self.index(i, j)]
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, c: Complex) {
        let k = self.index(i, j);
        self.coeffs[k] = c;
    }

    fn index(&self, i: usize, j: usize) -> usize {
        assert!(i + j <= self.order && (self.arity == 2 || j == 0));
        offset(self.arity, i + j) + j
    }

    /// Homogeneous component of degree `d` as monomial coefficients.
    pub fn component(&self, d: usize) -> &[Complex] {
        let o = offset(self.arity, d);
        &self.coeffs[o..o + block(self.arity, d)]
    }

    /// Lowest degree with a coefficient above `tol` in modulus.
    pub fn valuation(&self, tol: f64) -> Option<usize> {
        (0..=self.order).find(|&d| self.component(d).iter().any(|c| c.abs_f64() > tol))
    }

    pub fn truncate(&self, order: usize) -> Jet {
        let order = order.min(self.order);
        let len = offset(self.arity, order + 1);
        Jet {
            arity: self.arity,
            order,
            prec: self.prec,
            coeffs: self.coeffs[..len].to_vec(),
        }
    }

    pub fn scale(&self, c: &Complex) -> Jet {
        let mut out = self.clone();
        for x in out.coeffs.iter_mut() {
            if !x.is_zero() {
                *x = &*x * c;
            }
        }
        out
    }

    pub fn add(&self, rhs: &Jet) -> Jet {
        let mut out = self.shape_min(rhs);
        for (k, x) in out.coeffs.iter_mut().enumerate() {
            *x = &self.coeffs[k] + &rhs.coeffs[k];
        }
        out
    }

    pub fn sub(&self, rhs: &Jet) -> Jet {
        let mut out = self.shape_min(rhs);
        for (k, x) in out.coeffs.iter_mut().enumerate() {
            *x = &self.coeffs[k] - &rhs.coeffs[k];
        }
        out
    }

    fn shape_min(&self, rhs: &Jet) -> Jet {
        assert_eq!(self.arity, rhs.arity, "jet arity mismatch");
        let order = self.order.min(rhs.order);
        Jet::zero(self.arity, order, self.prec.max(rhs.prec)).expect("valid shape")
    }

    /// Adds `a_p · b_q` (homogeneous components) into component `p + q` of `acc`.
    fn mul_components_into(arity: usize, acc: &mut [Complex], a: &[Complex], b: &[Complex]) {
        for (ia, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (ib, cb) in b.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let k = if arity == 1 { 0 } else { ia + ib };
                acc[k] = &acc[k] + &(ca * cb);
            }
        }
    }

    pub fn mul(&self, rhs: &Jet) -> Jet {
        let mut out = self.shape_min(rhs);
        let lo_a = self.valuation(0.0).unwrap_or(self.order + 1);
        let lo_b = rhs.valuation(0.0).unwrap_or(rhs.order + 1);
        for d in (lo_a + lo_b)..=out.order {
            let mut acc = vec![Complex::zero(out.prec); block(out.arity, d)];
            for p in lo_a..=(d - lo_b) {
                Jet::mul_components_into(
                    out.arity,
                    &mut acc,
                    self.component(p),
                    rhs.component(d - p),
                );
            }
            let o = offset(out.arity, d);
            out.coeffs[o..o + acc.len()].clone_from_slice(&acc);
        }
        out
    }

    fn int(&self, k: usize) -> Complex {
        Complex::from_real(Real::from_i64(k as i64, self.prec))
    }

    /// `exp(f)`; the constant term enters as `exp(f₀)` only when it is zero.
    pub fn exp(&self) -> Result<Jet> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Inconsistent(
                "jet exp needs a zero constant term".into(),
            ));
        }
        let mut g = Jet::zero(self.arity, self.order, self.prec)?;
        g.coeffs[0] = Complex::one(self.prec);
        for k in 1..=self.order {
            let mut acc = vec![Complex::zero(self.prec); block(self.arity, k)];
            for m in 1..=k {
                let fm = self
                    .component(m)
                    .iter()
                    .map(|c| c.scale(&Real::from_i64(m as i64, self.prec)))
                    .collect::<Vec<_>>();
                Jet::mul_components_into(self.arity, &mut acc, &fm, g.component(k - m));
            }
            let inv = self.int(k).recip();
            let o = offset(self.arity, k);
            for (j, c) in acc.into_iter().enumerate() {
                g.coeffs[o + j] = &c * &inv;
            }
        }
        Ok(g)
    }

    /// `log(g / g₀)`, so the result has a zero constant term.
    pub fn log_normalized(&self) -> Result<Jet> {
        let g0 = &self.coeffs[0];
        if g0.is_zero() {
            return Err(Error::Inconsistent(
                "jet log of a series vanishing at the origin".into(),
            ));
        }
        let g0_inv = g0.recip();
        let mut f = Jet::zero(self.arity, self.order, self.prec)?;
        for k in 1..=self.order {
            let mut acc: Vec<Complex> =
                self.component(k).iter().map(|c| c * &self.int(k)).collect();
            for m in 1..k {
                let fm = f
                    .component(m)
                    .iter()
                    .map(|c| c.scale(&Real::from_i64(m as i64, self.prec)))
                    .collect::<Vec<_>>();
                let mut sub = vec![Complex::zero(self.prec); block(self.arity, k)];
                Jet::mul_components_into(self.arity, &mut sub, &fm, self.component(k - m));
                for (a, s) in acc.iter_mut().zip(sub) {
                    *a = &*a - &s;
                }
            }
            let inv = &self.int(k).recip() * &g0_inv;
            let o = offset(self.arity, k);
            for (j, c) in acc.into_iter().enumerate() {
                f.coeffs[o + j] = &c * &inv;
            }
        }
        Ok(f)
    }

    pub fn reciprocal(&self) -> Result<Jet> {
        let g0 = &self.coeffs[0];
        if g0.is_zero() {
            return Err(Error::Inconsistent(
                "jet reciprocal of a series vanishing at the origin".into(),
            ));
        }
        let inv0 = g0.recip();
        let neg_inv0 = -&inv0;
        let mut h = Jet::zero(self.arity, self.order, self.prec)?;
        h.coeffs[0] = inv0;
        for k in 1..=self.order {
            let mut acc = vec![Complex::zero(self.prec); block(self.arity, k)];
            for m in 1..=k {
                Jet::mul_components_into(
                    self.arity,
                    &mut acc,
                    self.component(m),
                    h.component(k - m),
                );
            }
            let o = offset(self.arity, k);
            for (j, c) in acc.into_iter().enumerate() {
                h.coeffs[o + j] = &c * &neg_inv0;
            }
        }
        Ok(h)
    }

    /// Gradient `(∂₁, ∂₂)` at the origin.
    pub fn gradient(&self) -> Vec<Complex> {
        self.component(1).to_vec()
    }

    /// Hessian matrix at the origin, row-major `arity × arity`.
    pub fn hessian(&self) -> Vec<Complex> {
        let c = self.component(2);
        let two = Complex::from_real(Real::from_i64(2, self.prec));
        if self.arity == 1 {
            vec![&c[0] * &two]
        } else {
            vec![&c[0] * &two, c[1].clone(), c[1].clone(), &c[2] * &two]
        }
    }

    /// The jet with its quadratic part removed.
    pub fn without_quadratic(&self) -> Jet {
        let mut out = self.clone();
        if self.order >= 2 {
            let o = offset(self.arity, 2);
            for k in 0..block(self.arity, 2) {
                out.coeffs[o + k] = Complex::zero(self.prec);
            }
        }
        out
    }

    /// `(𝒟^p F)(0)` for `𝒟 = Σ M_{ab} ∂_a ∂_b`, with `M` symmetric and row-major.
    ///
    /// Only the degree `2p` component of `F` contributes.
    pub fn apply_operator_power(&self, m: &[Complex], p: usize) -> Complex {
        if 2 * p > self.order {
            panic!("operator power {p} exceeds jet order {}", self.order);
        }
        let prec = self.prec;
        let mut comp: Vec<Complex> = self.component(2 * p).to_vec();
        let mut deg = 2 * p;
        let int = |k: usize| Real::from_i64(k as i64, prec);
        while deg > 0 {
            let nd = deg - 2;
            let mut next = vec![Complex::zero(prec); block(self.arity, nd)];
            if self.arity == 1 {
                next[0] = comp[0].scale(&int(deg * (deg - 1))) * m[0].clone();
            } else {
                // Monomial θ₁^i θ₂^j at offset j with i = deg − j.
                for (j, c) in comp.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let i = deg - j;
                    if i >= 2 {
                        let k = j;
                        next[k] = &next[k] + &(&c.scale(&int(i * (i - 1))) * &m[0]);
                    }
                    if i >= 1 && j >= 1 {
                        let k = j - 1;
                        let w = &c.scale(&int(2 * i * j)) * &m[1];
                        next[k] = &next[k] + &w;
                    }
                    if j >= 2 {
                        let k = j - 2;
                        next[k] = &next[k] + &(&c.scale(&int(j * (j - 1))) * &m[3]);
                    }
                }
            }
            comp = next;
            deg = nd;
        }
        comp[0].clone()
    }

    /// Re-rounds all coefficients to a new precision.
    pub fn with_precision(&self, prec: u32) -> Jet {
        Jet {
            arity: self.arity,
            order: self.order,
            prec,
            coeffs: self.coeffs.iter().map(|c| c.with_precision(prec)).collect(),
        }
    }
}

impl Scalar for Jet {
    fn zero_like(&self) -> Self {
        Jet::zero(self.arity, self.order, self.prec).expect("valid shape")
    }
    fn one_like(&self) -> Self {
        Jet::constant(Complex::one(self.prec), self.arity, self.order).expect("valid shape")
    }
    fn lift(&self, q: &BigRational) -> Self {
        Jet::constant(Complex::from_ratio(q, self.prec), self.arity, self.order)
            .expect("valid shape")
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn recip(&self) -> Self {
        self.reciprocal().expect("reciprocal of a unit jet")
    }
}

/// Jets of the coordinates `w_v · exp(i θ)` along the free axes.
///
/// `free` lists the coordinate indices (0 for `x`, 1 for `y`) that move; the
/// others stay at their base value. Returns the two coordinate jets.
pub fn coordinate_jets(
    base: &[Complex; 2],
    free: &[usize],
    order: usize,
    prec: u32,
) -> Result<[Jet; 2]> {
    let arity = free.len();
    let mut out = [
        Jet::constant(base[0].clone(), arity, order)?,
        Jet::constant(base[1].clone(), arity, order)?,
    ];
    for (slot, &v) in free.iter().enumerate() {
        out[v] = Jet::cis(slot, arity, order, prec)?.scale(&base[v]);
    }
    Ok(out)
}

/// Phase `φ(θ) = −log(P(w e^{iθ}) / P(w))`.
pub fn phase_jet(
    kernel: &Poly,
    base: &[Complex; 2],
    free: &[usize],
    order: usize,
    prec: u32,
) -> Result<Jet> {
    let [x, y] = coordinate_jets(base, free, order, prec)?;
    let p = kernel.eval2(&x, &y);
    let log = p.log_normalized()?;
    Ok(log.scale(&Complex::from_real(Real::from_i64(-1, prec))))
}

/// Amplitude: a rational function `num / den` along the torus, times the free coordinates.
pub fn amplitude_jet(
    num: &Poly,
    den: &Poly,
    base: &[Complex; 2],
    free: &[usize],
    order: usize,
    prec: u32,
) -> Result<Jet> {
    let [x, y] = coordinate_jets(base, free, order, prec)?;
    let n = num.eval2(&x, &y);
    let d = den.eval2(&x, &y);
    if d.coeffs[0].abs_f64() == 0.0 {
        return Err(Error::DegenerateDenominator);
    }
    let mut a = n.mul(&d.reciprocal()?);
    for &v in free {
        a = a.mul(if v == 0 { &x } else { &y });
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::X;

    const P: u32 = 128;

    fn c(v: f64) -> Complex {
        Complex::from_f64(v, 0.0, P)
    }

    fn close(a: &Complex, re: f64, im: f64) -> bool {
        let (x, y) = a.to_f64();
        (x - re).abs() < 1e-14 && (y - im).abs() < 1e-14
    }

    #[test]
    fn exp_log_roundtrip() {
        let mut f = Jet::zero(2, 8, P).unwrap();
        f.set_coeff(1, 0, c(0.5));
        f.set_coeff(0, 1, c(-0.25));
        f.set_coeff(1, 1, c(2.0));
        f.set_coeff(0, 3, c(1.5));
        let g = f.exp().unwrap();
        let back = g.log_normalized().unwrap();
        for (a, b) in back.coeffs.iter().zip(&f.coeffs) {
            assert!((a - b).abs_f64() < 1e-30);
        }
    }

    #[test]
    fn reciprocal_inverts() {
        let mut f = Jet::constant(c(2.0), 1, 10).unwrap();
        f.set_coeff(1, 0, c(1.0));
        f.set_coeff(3, 0, c(-0.5));
        let h = f.mul(&f.reciprocal().unwrap());
        assert!(close(h.coeff(0, 0), 1.0, 0.0));
        for k in 1..=10 {
            assert!(h.coeff(k, 0).abs_f64() < 1e-30);
        }
    }

    #[test]
    fn cis_matches_exponential() {
        let mut ith = Jet::zero(1, 12, P).unwrap();
        ith.set_coeff(1, 0, Complex::i(P));
        let e = ith.exp().unwrap();
        let cis = Jet::cis(0, 1, 12, P).unwrap();
        for k in 0..=12 {
            assert!((e.coeff(k, 0) - cis.coeff(k, 0)).abs_f64() < 1e-30);
        }
    }

    #[test]
    fn operator_power_on_monomials() {
        // 𝒟 = ∂₁² + ∂₂² applied twice to θ₁²θ₂² gives 8.
        let mut f = Jet::zero(2, 4, P).unwrap();
        f.set_coeff(2, 2, c(1.0));
        let m = [c(1.0), c(0.0), c(0.0), c(1.0)];
        assert!(close(&f.apply_operator_power(&m, 2), 8.0, 0.0));
        // Mixed part: (2∂₁∂₂)(θ₁θ₂) = 2.
        let mut g = Jet::zero(2, 2, P).unwrap();
        g.set_coeff(1, 1, c(1.0));
        assert!(close(
            &g.apply_operator_power(&[c(0.0), c(1.0), c(1.0), c(0.0)], 1),
            2.0,
            0.0
        ));
    }

    #[test]
    fn phase_of_simple_kernel() {
        // P = x + 1/x at w = 1: φ = −log cos θ = θ²/2 + θ⁴/12 + …
        let p = Poly::var(X) + Poly::monomial(BigRational::from_integer(1.into()), [-1, 0, 0]);
        let base = [c(1.0), c(1.0)];
        let phi = phase_jet(&p, &base, &[0], 6, P).unwrap();
        assert!(close(phi.coeff(1, 0), 0.0, 0.0));
        assert!(close(phi.coeff(2, 0), 0.5, 0.0));
        assert!(close(phi.coeff(4, 0), 1.0 / 12.0, 0.0));
        assert!(close(phi.coeff(6, 0), 1.0 / 45.0, 0.0));
        let h = phi.hessian();
        assert!(close(&h[0], 1.0, 0.0));
    }

    #[test]
    fn order_cap() {
        assert!(matches!(
            Jet::zero(1, MAX_ORDER + 1, P),
            Err(Error::OrderExhausted { .. })
        ));
    }
}
