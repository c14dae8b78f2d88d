//! The two reflectable A₂ step sets, central weights and the regime classifier.

use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::real::Real;
use crate::surd::Surd;

/// Which A₂ step set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    Tandem,
    DoubleTandem,
}

const TANDEM_STEPS: [(i32, i32); 3] = [(1, 0), (-1, 1), (0, -1)];
const DOUBLE_TANDEM_STEPS: [(i32, i32); 6] = [(1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (-1, 0)];

impl ModelKind {
    pub fn steps(self) -> &'static [(i32, i32)] {
        match self {
            ModelKind::Tandem => &TANDEM_STEPS,
            ModelKind::DoubleTandem => &DOUBLE_TANDEM_STEPS,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Tandem => "tandem",
            ModelKind::DoubleTandem => "double-tandem",
        }
    }

    /// Whether an endpoint `(i, j)` after `n` steps can carry walks.
    ///
    /// Every Tandem step changes `i − j` by 1 modulo 3.
    pub fn reachable(self, i: usize, j: usize, n: usize) -> bool {
        match self {
            ModelKind::Tandem => (i as i64 - j as i64 - n as i64).rem_euclid(3) == 0,
            ModelKind::DoubleTandem => true,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = alloc::string::String;
    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s {
            "tandem" | "T" => Ok(ModelKind::Tandem),
            "double-tandem" | "doubletandem" | "DT" => Ok(ModelKind::DoubleTandem),
            _ => Err(alloc::format!(
                "unknown model '{s}' (expected tandem or double-tandem)"
            )),
        }
    }
}

/// Central weights `(a, b)`: a step `(dx, dy)` weighs `a^dx · b^dy`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weights {
    a: BigRational,
    b: BigRational,
}

impl Weights {
    pub fn new(a: BigRational, b: BigRational) -> Result<Self> {
        if !a.is_positive() || !b.is_positive() {
            return Err(Error::InvalidWeights);
        }
        Ok(Weights { a, b })
    }

    /// Shorthand for `a = an/ad`, `b = bn/bd`.
    pub fn from_fractions(an: i64, ad: i64, bn: i64, bd: i64) -> Result<Self> {
        if ad == 0 || bd == 0 {
            return Err(Error::InvalidWeights);
        }
        Weights::new(
            BigRational::new(BigInt::from(an), BigInt::from(ad)),
            BigRational::new(BigInt::from(bn), BigInt::from(bd)),
        )
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn a_real(&self, prec: u32) -> Real {
        Real::from_ratio(&self.a, prec)
    }

    pub fn b_real(&self, prec: u32) -> Real {
        Real::from_ratio(&self.b, prec)
    }

    pub fn a_f64(&self) -> f64 {
        crate::ratio_to_f64(&self.a)
    }

    pub fn b_f64(&self) -> f64 {
        crate::ratio_to_f64(&self.b)
    }

    /// Weights with the roles of `a` and `b` exchanged.
    pub fn swapped(&self) -> Weights {
        Weights {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }
}

/// A step set together with its weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    kind: ModelKind,
    weights: Weights,
}

impl Model {
    pub fn new(kind: ModelKind, weights: Weights) -> Self {
        Model { kind, weights }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn steps(&self) -> &'static [(i32, i32)] {
        self.kind.steps()
    }

    pub fn step_weight(&self, step: (i32, i32)) -> BigRational {
        self.weights.a.pow(step.0) * self.weights.b.pow(step.1)
    }

    pub fn inventory(&self) -> Inventory {
        Inventory::new(self)
    }

    pub fn regime(&self) -> Regime {
        classify(&self.weights, self.kind)
    }
}

/// The weighted step inventory `S(x, y) = Σ w(s)·x^dx·y^dy`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inventory {
    kind: ModelKind,
    s: Poly,
}

impl Inventory {
    pub fn new(model: &Model) -> Self {
        let s = Poly::from_terms(
            model
                .steps()
                .iter()
                .map(|&(dx, dy)| ([dx, dy, 0], model.step_weight((dx, dy)))),
        );
        Inventory {
            kind: model.kind,
            s,
        }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    /// `S` as a Laurent polynomial in `(x, y)`.
    pub fn laurent(&self) -> &Poly {
        &self.s
    }

    /// The kernel `P(x, y) = S(1/x, 1/y)` whose powers carry the Cauchy integrand.
    pub fn kernel(&self) -> Poly {
        Poly::from_terms(self.s.terms().map(|(e, c)| ([-e[0], -e[1], 0], c.clone())))
    }

    /// `x·y·S(1/x, 1/y)`, a genuine polynomial.
    pub fn cleared_kernel(&self) -> Poly {
        self.kernel().shift([1, 1, 0])
    }

    pub fn evaluate<S: crate::scalar::Scalar>(&self, x: &S, y: &S) -> S {
        self.s.eval2(x, y)
    }
}

/// The nine weight regimes of the A₂ models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    /// `1 < √b < a < b²`
    Interior,
    /// `a = b² > 1`
    AxialA,
    /// `b = a² > 1`
    AxialB,
    /// `a > 1`, `b < √a`
    DirectionalA,
    /// `b > 1`, `a < √b`
    DirectionalB,
    /// `a = b = 1`
    Balanced,
    /// `a < 1`, `b = 1` (conjectured half contribution)
    BoundaryAStar,
    /// `b < 1`, `a = 1` (conjectured half contribution)
    BoundaryBStar,
    /// `a < 1`, `b < 1`
    Reluctant,
}

impl Regime {
    pub const ALL: [Regime; 9] = [
        Regime::Interior,
        Regime::AxialA,
        Regime::AxialB,
        Regime::DirectionalA,
        Regime::DirectionalB,
        Regime::Balanced,
        Regime::BoundaryAStar,
        Regime::BoundaryBStar,
        Regime::Reluctant,
    ];

    /// True for the two regimes whose constant rests on the half-contribution conjecture.
    pub fn conjectured(self) -> bool {
        matches!(self, Regime::BoundaryAStar | Regime::BoundaryBStar)
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Interior => "Interior",
            Regime::AxialA => "AxialA",
            Regime::AxialB => "AxialB",
            Regime::DirectionalA => "DirectionalA",
            Regime::DirectionalB => "DirectionalB",
            Regime::Balanced => "Balanced",
            Regime::BoundaryAStar => "BoundaryA*",
            Regime::BoundaryBStar => "BoundaryB*",
            Regime::Reluctant => "Reluctant",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Regime {
    type Err = alloc::string::String;
    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        Regime::ALL
            .iter()
            .copied()
            .find(|r| r.name() == s)
            .ok_or_else(|| alloc::format!("unknown regime '{s}'"))
    }
}

/// Exact regime of a weight pair. The two models share the same regime map.
pub fn classify(weights: &Weights, _kind: ModelKind) -> Regime {
    let one = BigRational::one();
    let (a, b) = (&weights.a, &weights.b);
    let a2 = a * a;
    let b2 = b * b;
    if a == &one && b == &one {
        return Regime::Balanced;
    }
    if a < &one && b < &one {
        return Regime::Reluctant;
    }
    if a < &one && b == &one {
        return Regime::BoundaryAStar;
    }
    if a == &one && b < &one {
        return Regime::BoundaryBStar;
    }
    // At least one weight exceeds 1 from here on.
    if a == &b2 {
        return Regime::AxialA;
    }
    if b == &a2 {
        return Regime::AxialB;
    }
    if a > &b2 {
        return Regime::DirectionalA;
    }
    if b > &a2 {
        return Regime::DirectionalB;
    }
    Regime::Interior
}

/// Exponential growth rate `ρ` for a regime, exact in `Q(√a)` or `Q(√b)`.
pub fn exponential_growth(regime: Regime, weights: &Weights, kind: ModelKind) -> Surd {
    let a = Surd::from_rational(weights.a.clone());
    let b = Surd::from_rational(weights.b.clone());
    let ra = Surd::sqrt_of(&weights.a);
    let rb = Surd::sqrt_of(&weights.b);
    let one = Surd::from_integer(1);
    let two = Surd::from_integer(2);
    match kind {
        ModelKind::Tandem => match regime {
            Regime::Interior => a.clone() + b.clone() / a + one / b,
            Regime::AxialA | Regime::DirectionalA => a + two / ra,
            Regime::AxialB | Regime::DirectionalB => two * rb + one / b,
            _ => Surd::from_integer(3),
        },
        ModelKind::DoubleTandem => match regime {
            Regime::Interior => {
                a.clone()
                    + one.clone() / a.clone()
                    + b.clone() / a.clone()
                    + a / b.clone()
                    + one / b.clone()
                    + b
            }
            Regime::AxialA | Regime::DirectionalA => {
                (a.clone() * a.clone() + two * (a.clone() + one.clone()) * ra + one) / a
            }
            Regime::AxialB | Regime::DirectionalB => {
                (b.clone() * b.clone() + two * (b.clone() + one.clone()) * rb + one) / b
            }
            _ => Surd::from_integer(6),
        },
    }
}

/// Convenience: classify, then return `ρ`.
pub fn growth_of(weights: &Weights, kind: ModelKind) -> Surd {
    exponential_growth(classify(weights, kind), weights, kind)
}

/// Parses `p/q` or an integer into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let q = match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            BigRational::new(n, d)
        }
        None => BigRational::from_integer(s.parse().ok()?),
    };
    Some(q)
}

#[cfg(test)]
fn small(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn w(an: i64, ad: i64, bn: i64, bd: i64) -> Weights {
        Weights::from_fractions(an, ad, bn, bd).unwrap()
    }

    #[test]
    fn step_sets() {
        assert_eq!(ModelKind::Tandem.steps(), &[(1, 0), (-1, 1), (0, -1)]);
        assert_eq!(ModelKind::DoubleTandem.steps().len(), 6);
        for s in ModelKind::Tandem.steps() {
            assert!(ModelKind::DoubleTandem.steps().contains(s));
            assert!(ModelKind::DoubleTandem.steps().contains(&(-s.0, -s.1)));
        }
    }

    #[test]
    fn central_step_weights() {
        let m = Model::new(ModelKind::Tandem, w(2, 1, 3, 1));
        assert_eq!(m.step_weight((-1, 1)), small(3, 2));
        assert_eq!(m.step_weight((0, -1)), small(1, 3));
    }

    #[test]
    fn cleared_kernel_has_the_three_monomials() {
        let m = Model::new(ModelKind::Tandem, w(2, 1, 3, 1));
        let k = m.inventory().cleared_kernel();
        // a·y + b·x²/a + x·y²/b
        let expect = Poly::from_terms([
            ([0, 1, 0], rat(2)),
            ([2, 0, 0], small(3, 2)),
            ([1, 2, 0], small(1, 3)),
        ]);
        assert_eq!(k, expect);
    }

    #[test]
    fn rejects_nonpositive_weights() {
        assert_eq!(Weights::new(rat(0), rat(1)), Err(Error::InvalidWeights));
        assert_eq!(Weights::new(rat(1), rat(-2)), Err(Error::InvalidWeights));
    }

    #[test]
    fn classifier_examples() {
        let k = ModelKind::Tandem;
        assert_eq!(classify(&w(2, 1, 3, 1), k), Regime::Interior);
        assert_eq!(classify(&w(4, 1, 2, 1), k), Regime::AxialA);
        assert_eq!(classify(&w(2, 1, 4, 1), k), Regime::AxialB);
        assert_eq!(classify(&w(4, 1, 1, 1), k), Regime::DirectionalA);
        assert_eq!(classify(&w(1, 1, 4, 1), k), Regime::DirectionalB);
        assert_eq!(classify(&w(1, 1, 1, 1), k), Regime::Balanced);
        assert_eq!(classify(&w(1, 8, 1, 1), k), Regime::BoundaryAStar);
        let r = classify(&w(1, 1, 1, 4), k);
        assert_eq!(r, Regime::BoundaryBStar);
        assert!(r.conjectured());
        assert_eq!(classify(&w(1, 2, 1, 2), k), Regime::Reluctant);
    }

    #[test]
    fn growth_examples() {
        let t = ModelKind::Tandem;
        let dt = ModelKind::DoubleTandem;
        assert_eq!(growth_of(&w(1, 1, 1, 1), t), Surd::from_integer(3));
        assert_eq!(growth_of(&w(1, 1, 1, 1), dt), Surd::from_integer(6));
        assert_eq!(growth_of(&w(4, 1, 2, 1), t), Surd::from_integer(5));
        assert_eq!(
            growth_of(&w(4, 1, 2, 1), dt),
            Surd::from_rational(small(37, 4))
        );
        assert_eq!(
            alloc::format!("{}", growth_of(&w(2, 1, 1, 1), t)),
            "2 + sqrt(2)"
        );
    }

    #[test]
    fn parses_fractions() {
        assert_eq!(parse_rational("3/6"), Some(small(1, 2)));
        assert_eq!(parse_rational("7"), Some(rat(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
